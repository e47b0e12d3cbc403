#include "tdms/table.hpp"

#include <algorithm>

#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kMaxSpan = 64;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Scans an unsigned decimal at `i`; returns the end position or npos.
std::size_t scan_number(std::string_view s, std::size_t i) {
    std::size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        ++i;
        ++digits;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
            ++digits;
        }
    }
    return digits ? i : std::string_view::npos;
}

std::size_t skip_spaces(std::string_view s, std::size_t i) {
    while (i < s.size() && is_space(s[i])) ++i;
    return i;
}

bool is_origin(const TableStruct& t, std::size_t r, std::size_t c) {
    const Cell& cell = t.grid[r][c];
    return cell.row == r && cell.col == c;
}

}  // namespace

std::optional<NumericValue> detect_numeric(std::string_view cell_text) {
    std::string trimmed = text::trim(cell_text);
    std::string_view s = trimmed;
    std::size_t i = 0;
    bool negative = false;
    if (s.starts_with("\xE2\x88\x92")) {  // U+2212 minus sign
        negative = true;
        i = 3;
    } else if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        i = 1;
    }
    std::size_t start = i;
    std::size_t end = scan_number(s, i);
    if (end == std::string_view::npos) return std::nullopt;
    auto value = Decimal::parse(s.substr(start, end - start));
    if (!value) return std::nullopt;
    if (negative) *value = Decimal(-value->mantissa(), value->scale());

    bool percent = false;
    i = skip_spaces(s, end);
    if (i < s.size() && s[i] == '%') {
        percent = true;
        i = skip_spaces(s, i + 1);
    }
    if (i < s.size()) {
        std::size_t after;
        if (s.substr(i).starts_with("\xC2\xB1")) {
            after = i + 2;
        } else if (s.substr(i).starts_with("+/-")) {
            after = i + 3;
        } else if (s.substr(i).starts_with("+-")) {
            after = i + 2;
        } else {
            return std::nullopt;
        }
        after = skip_spaces(s, after);
        std::size_t dev_end = scan_number(s, after);
        if (dev_end == std::string_view::npos) return std::nullopt;
        i = skip_spaces(s, dev_end);
        if (i < s.size() && s[i] == '%') {
            percent = true;
            i = skip_spaces(s, i + 1);
        }
        if (i != s.size()) return std::nullopt;
    }
    return NumericValue{*value, percent};
}

std::size_t body_start_row(const TableStruct& table) {
    for (std::size_t r = 0; r < table.rows(); ++r) {
        std::size_t filled = 0, numeric = 0;
        for (const Cell& c : table.grid[r]) {
            if (c.text.empty()) continue;
            ++filled;
            if (detect_numeric(c.text)) ++numeric;
        }
        if (filled > 0 && 2 * numeric >= filled) return r;
    }
    return table.rows();
}

TableStruct associate_headers(TableStruct table) {
    table.numeric_cells.clear();
    const std::size_t body = body_start_row(table);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.grid[r].size(); ++c) {
            if (!is_origin(table, r, c)) continue;
            const Cell& cell = table.grid[r][c];
            auto num = detect_numeric(cell.text);
            if (!num) continue;
            NumericCell nc;
            nc.row = r;
            nc.col = c;
            nc.value = num->value;
            nc.percent_flag = num->percent_flag;
            nc.is_bold = cell.is_bold;
            for (std::size_t hr = 0; hr < std::min(r, body); ++hr) {
                const Cell& h = table.grid[hr][c];
                if (h.row != hr) continue;  // vertical span continuation
                if (h.text.empty() || detect_numeric(h.text)) continue;
                nc.column_headers.push_back(h.text);
            }
            for (std::size_t lc = c; lc-- > 0;) {
                const Cell& l = table.grid[r][lc];
                if (!l.text.empty() && !detect_numeric(l.text)) {
                    nc.row_label = l.text;
                    break;
                }
            }
            table.numeric_cells.push_back(std::move(nc));
        }
    }
    return table;
}

std::optional<TableStruct> layout_table(const RawTable& raw, std::string& warning) {
    if (raw.rows.empty()) {
        warning = "table " + raw.table_id + ": no row markup";
        return std::nullopt;
    }
    std::vector<std::vector<std::optional<Cell>>> slots;
    auto ensure = [&](std::size_t r, std::size_t c) {
        if (slots.size() <= r) slots.resize(r + 1);
        if (slots[r].size() <= c) slots[r].resize(c + 1);
    };
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        ensure(r, 0);
        std::size_t c = 0;
        for (const RawCell& rc : raw.rows[r]) {
            if (rc.colspan == 0 || rc.rowspan == 0 || rc.colspan > kMaxSpan || rc.rowspan > kMaxSpan) {
                warning = "table " + raw.table_id + ": invalid span in row " + std::to_string(r);
                return std::nullopt;
            }
            while (c < slots[r].size() && slots[r][c]) ++c;
            for (std::size_t dr = 0; dr < rc.rowspan; ++dr) {
                for (std::size_t dc = 0; dc < rc.colspan; ++dc) {
                    ensure(r + dr, c + dc);
                    if (slots[r + dr][c + dc]) {
                        warning = "table " + raw.table_id + ": overlapping spans in row " + std::to_string(r);
                        return std::nullopt;
                    }
                    slots[r + dr][c + dc] = Cell{rc.text, rc.is_bold, r, c};
                }
            }
            c += rc.colspan;
        }
    }
    std::size_t width = 0;
    for (const auto& row : slots) width = std::max(width, row.size());
    if (width == 0) {
        warning = "table " + raw.table_id + ": no cells";
        return std::nullopt;
    }

    TableStruct t;
    t.table_id = raw.table_id;
    t.caption = raw.caption;
    t.no_bold_info = !raw.has_typeface_info;
    t.grid.resize(slots.size());
    for (std::size_t r = 0; r < slots.size(); ++r) {
        t.grid[r].resize(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (c < slots[r].size() && slots[r][c]) {
                t.grid[r][c] = *slots[r][c];
            } else {
                t.grid[r][c] = Cell{"", false, r, c};
            }
        }
    }
    return associate_headers(std::move(t));
}

std::vector<TableStruct> finalize_tables(const std::vector<RawTable>& raw, std::vector<std::string>& warnings) {
    std::vector<TableStruct> out;
    for (const RawTable& rt : raw) {
        std::string warning;
        auto t = layout_table(rt, warning);
        if (!t) {
            warnings.push_back(warning + " (skipped)");
            continue;
        }
        if (t->numeric_cells.empty()) continue;
        if (!rt.caption_present || rt.caption.empty()) warnings.push_back("table " + rt.table_id + ": missing caption");
        out.push_back(std::move(*t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

TablePaperAnnotation to_annotation(std::string doc_id, const std::vector<TableStruct>& tables) {
    TablePaperAnnotation paper;
    paper.doc_id = std::move(doc_id);
    for (const TableStruct& t : tables) {
        TableAnnotation ta;
        ta.table_id = t.table_id;
        ta.caption = t.caption;
        for (const NumericCell& nc : t.numeric_cells) {
            ta.cells.push_back({nc.value.to_string(), nc.is_bold, nc.row_label, nc.column_headers});
        }
        paper.tables.push_back(std::move(ta));
    }
    return paper;
}

std::string to_json(const TablePaperAnnotation& paper) {
    json j;
    j["doc_id"] = paper.doc_id;
    j["tables"] = json::array();
    for (const auto& t : paper.tables) {
        json tj;
        if (!t.table_id.empty()) tj["table_id"] = t.table_id;
        tj["caption"] = t.caption;
        tj["cells"] = json::array();
        for (const auto& c : t.cells) {
            tj["cells"].push_back(
                {{"value", c.value}, {"bold", c.bold}, {"row_label", c.row_label}, {"column_labels", c.column_labels}});
        }
        j["tables"].push_back(std::move(tj));
    }
    return j.dump(2) + "\n";
}

TablePaperAnnotation table_annotation_from_json(std::string_view input) {
    try {
        json j = json::parse(input);
        TablePaperAnnotation paper;
        paper.doc_id = j.at("doc_id").get<std::string>();
        for (const auto& tj : j.at("tables")) {
            TableAnnotation t;
            t.table_id = tj.value("table_id", "");
            t.caption = tj.value("caption", "");
            for (const auto& cj : tj.at("cells")) {
                TableCellAnnotation c;
                const auto& v = cj.at("value");
                c.value = v.is_string() ? v.get<std::string>() : v.dump();
                c.bold = cj.value("bold", false);
                c.row_label = cj.value("row_label", "");
                c.column_labels = cj.value("column_labels", std::vector<std::string>{});
                t.cells.push_back(std::move(c));
            }
            paper.tables.push_back(std::move(t));
        }
        return paper;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("table annotation: ") + e.what(), e.byte);
    } catch (const json::exception& e) {
        throw FormatError(std::string("table annotation: ") + e.what());
    }
}

std::string tables_to_json(std::string_view doc_id, const std::vector<TableStruct>& tables) {
    json j;
    j["doc_id"] = doc_id;
    j["tables"] = json::array();
    for (const TableStruct& t : tables) {
        json tj;
        tj["table_id"] = t.table_id;
        tj["caption"] = t.caption;
        tj["no_bold_info"] = t.no_bold_info;
        json grid = json::array();
        for (const auto& row : t.grid) {
            json rj = json::array();
            for (const Cell& c : row) rj.push_back({{"text", c.text}, {"bold", c.is_bold}, {"row", c.row}, {"col", c.col}});
            grid.push_back(std::move(rj));
        }
        tj["grid"] = std::move(grid);
        tj["cells"] = json::array();
        for (const NumericCell& nc : t.numeric_cells) {
            tj["cells"].push_back({{"value", nc.value.to_string()},
                                   {"bold", nc.is_bold},
                                   {"row_label", nc.row_label},
                                   {"column_labels", nc.column_headers},
                                   {"percent", nc.percent_flag},
                                   {"row", nc.row},
                                   {"col", nc.col}});
        }
        j["tables"].push_back(std::move(tj));
    }
    return j.dump(2) + "\n";
}

std::vector<TableStruct> tables_from_json(std::string_view input) {
    try {
        json j = json::parse(input);
        std::vector<TableStruct> out;
        for (const auto& tj : j.at("tables")) {
            TableStruct t;
            t.table_id = tj.at("table_id").get<std::string>();
            t.caption = tj.value("caption", "");
            t.no_bold_info = tj.value("no_bold_info", false);
            std::size_t width = 0;
            for (const auto& rj : tj.at("grid")) {
                std::vector<Cell> row;
                for (const auto& cj : rj) {
                    row.push_back(Cell{cj.at("text").get<std::string>(), cj.value("bold", false),
                                       cj.at("row").get<std::size_t>(), cj.at("col").get<std::size_t>()});
                }
                width = std::max(width, row.size());
                t.grid.push_back(std::move(row));
            }
            for (std::size_t r = 0; r < t.grid.size(); ++r) {
                if (t.grid[r].size() != width) throw FormatError("table " + t.table_id + ": ragged grid");
                for (const Cell& c : t.grid[r])
                    if (c.row >= t.grid.size() || c.col >= width)
                        throw FormatError("table " + t.table_id + ": cell origin out of bounds");
            }
            out.push_back(associate_headers(std::move(t)));
        }
        return out;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("tables: ") + e.what(), e.byte);
    } catch (const json::exception& e) {
        throw FormatError(std::string("tables: ") + e.what());
    }
}

}  // namespace tdms
