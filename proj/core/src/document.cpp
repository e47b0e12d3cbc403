#include "tdms/document.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/io.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 34> kAbbreviations = {
    "e.g.",  "i.e.",  "fig.",  "figs.", "eq.",  "eqs.",    "sec.",  "secs.", "tab.",
    "no.",   "nos.",  "vs.",   "cf.",   "al.",  "approx.", "resp.", "dr.",   "mr.",
    "mrs.",  "ms.",   "prof.", "st.",   "jr.",  "ref.",    "refs.", "ch.",   "vol.",
    "pp.",   "ed.",   "eds.",  "viz.",  "w.r.t.", "i.i.d.", "incl.",
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool starts_sentence(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' || c == '(' || c == '[' || u >= 0x80;
}

bool is_abbreviation(std::string_view body, std::size_t period) {
    std::size_t start = period;
    while (start > 0 && !is_space(body[start - 1])) --start;
    std::string word(body.substr(start, period - start + 1));
    while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'' || word.front() == '['))
        word.erase(word.begin());
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

void finish_section(RawDocument& doc, std::string heading, const std::vector<std::string>& lines) {
    Section s;
    s.heading = text::squash_whitespace(text::nfc(heading));
    s.body = text::squash_whitespace(text::nfc(text::join(lines, " ")));
    s.sentences = split_sentences(s.body);
    doc.sections.push_back(std::move(s));
}

void check_sparse(RawDocument& doc) {
    if (doc.title.empty() && doc.abstract.empty() && doc.sections.empty() && doc.tables.empty())
        throw EmptyDocumentError("document has no title, abstract, sections or tables");
    if (doc.title.empty()) doc.warnings.push_back("missing title");
    if (doc.abstract.empty()) doc.warnings.push_back("missing abstract");
}

// Parses one table row in the line format into raw cells.
std::vector<RawCell> parse_table_row(std::string_view line) {
    std::string trimmed = text::trim(line);
    std::string_view row = trimmed;
    if (!row.empty() && row.front() == '|') row.remove_prefix(1);
    if (!row.empty() && row.back() == '|') row.remove_suffix(1);
    std::vector<RawCell> cells;
    for (auto& field : text::split(row, '|')) {
        RawCell cell;
        std::string t = text::trim(field);
        // span prefixes: {cols=N} / {rows=N}, in any order
        while (!t.empty() && t.front() == '{') {
            auto close = t.find('}');
            if (close == std::string::npos) break;
            std::string spec = t.substr(1, close - 1);
            auto eq = spec.find('=');
            if (eq == std::string::npos) break;
            std::string key = spec.substr(0, eq);
            std::size_t n = 0;
            try {
                n = static_cast<std::size_t>(std::stoul(spec.substr(eq + 1)));
            } catch (const std::exception&) {
                break;
            }
            if (key == "cols") {
                cell.colspan = n;
            } else if (key == "rows") {
                cell.rowspan = n;
            } else {
                break;
            }
            t = text::trim(std::string_view(t).substr(close + 1));
        }
        if (t.size() >= 4 && t.starts_with("**") && t.ends_with("**")) {
            cell.is_bold = true;
            t = text::trim(std::string_view(t).substr(2, t.size() - 4));
        }
        cell.text = text::squash_whitespace(text::nfc(t));
        cells.push_back(std::move(cell));
    }
    return cells;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view body) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        std::string s = text::squash_whitespace(body.substr(start, end - start));
        if (!s.empty()) out.push_back(std::move(s));
        start = end;
    };
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t end = i + 1;
        while (end < body.size() && (is_closer(body[end]) || body[end] == '.' || body[end] == '!' || body[end] == '?'))
            ++end;
        if (end < body.size() && !is_space(body[end])) continue;
        std::size_t next = end;
        while (next < body.size() && is_space(body[next])) ++next;
        if (next < body.size() && !starts_sentence(body[next])) continue;
        if (c == '.' && is_abbreviation(body, i)) continue;
        emit(end);
        i = end - 1;
    }
    emit(body.size());
    return out;
}

RawDocument parse_structured(std::string_view input, std::string doc_id) {
    if (text::trim(input).empty()) throw EmptyDocumentError("empty document");
    RawDocument doc;
    doc.doc_id = std::move(doc_id);

    enum class Block { none, title, abstract, section, table } block = Block::none;
    std::vector<std::string> lines;
    std::string heading;
    std::vector<RawTable> raw_tables;
    std::size_t table_index = 0;

    auto close_block = [&] {
        switch (block) {
            case Block::title:
                doc.title = text::squash_whitespace(text::nfc(text::join(lines, " ")));
                break;
            case Block::abstract:
                doc.abstract = text::squash_whitespace(text::nfc(text::join(lines, " ")));
                break;
            case Block::section:
                finish_section(doc, heading, lines);
                break;
            case Block::table:
            case Block::none:
                break;
        }
        lines.clear();
        block = Block::none;
    };

    for (auto& raw_line : text::split(input, '\n')) {
        std::string line = raw_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view = line;
        auto directive = [&](std::string_view tag) {
            if (!view.starts_with(tag)) return false;
            return view.size() == tag.size() || view[tag.size()] == ' ' || view[tag.size()] == '\t';
        };
        auto rest = [&](std::string_view tag) { return text::trim(view.substr(tag.size())); };

        if (directive("#DOCID")) {
            close_block();
            if (doc.doc_id.empty()) doc.doc_id = rest("#DOCID");
        } else if (directive("#TITLE")) {
            close_block();
            block = Block::title;
            if (auto r = rest("#TITLE"); !r.empty()) lines.push_back(r);
        } else if (directive("#ABSTRACT")) {
            close_block();
            block = Block::abstract;
            if (auto r = rest("#ABSTRACT"); !r.empty()) lines.push_back(r);
        } else if (directive("#SECTION")) {
            close_block();
            block = Block::section;
            heading = rest("#SECTION");
        } else if (directive("#TABLE")) {
            close_block();
            block = Block::table;
            RawTable t;
            t.table_id = "tab_" + std::to_string(table_index++);
            t.caption = text::squash_whitespace(text::nfc(rest("#TABLE")));
            t.caption_present = !t.caption.empty();
            raw_tables.push_back(std::move(t));
        } else if (directive("#NO_BOLD_INFO") && block == Block::table) {
            raw_tables.back().has_typeface_info = false;
        } else if (block == Block::table) {
            if (!text::trim(view).empty()) raw_tables.back().rows.push_back(parse_table_row(view));
        } else if (block != Block::none) {
            lines.push_back(line);
        }
    }
    close_block();

    doc.tables = finalize_tables(raw_tables, doc.warnings);
    check_sparse(doc);
    return doc;
}

RawDocument load_document(const std::filesystem::path& path) {
    std::string content = io::read_file(path);
    std::string name = path.filename().string();
    std::string doc_id = name.substr(0, name.find('.'));
    if (path.extension() == ".xml") return parse_tei(content, doc_id);
    return parse_structured(content, doc_id);
}

std::string to_canonical_json(const RawDocument& doc) {
    json j;
    j["doc_id"] = doc.doc_id;
    j["title"] = doc.title;
    j["abstract"] = doc.abstract;
    j["sections"] = json::array();
    for (const auto& s : doc.sections) {
        json sj;
        sj["heading"] = s.heading;
        sj["body"] = s.body;
        j["sections"].push_back(std::move(sj));
    }
    return j.dump(2) + "\n";
}

RawDocument from_canonical_json(std::string_view input) {
    json j;
    try {
        j = json::parse(input);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("canonical document: ") + e.what(), e.byte);
    }
    try {
        RawDocument doc;
        doc.doc_id = j.at("doc_id").get<std::string>();
        doc.title = j.at("title").get<std::string>();
        doc.abstract = j.at("abstract").get<std::string>();
        for (const auto& sj : j.at("sections")) {
            Section s;
            s.heading = sj.at("heading").get<std::string>();
            s.body = sj.at("body").get<std::string>();
            s.sentences = split_sentences(s.body);
            doc.sections.push_back(std::move(s));
        }
        return doc;
    } catch (const json::exception& e) {
        throw FormatError(std::string("canonical document: ") + e.what());
    }
}

}  // namespace tdms
