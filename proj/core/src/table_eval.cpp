#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tdms/error.hpp"
#include "tdms/metrics.hpp"
#include "tdms/table.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

std::string norm(std::string_view s) { return text::fold_case(text::squash_whitespace(s)); }

std::string norm_value(std::string_view s) {
    if (auto v = detect_numeric(s)) return v->value.normalized().to_string() + (v->percent_flag ? "%" : "");
    return norm(s);
}

std::multiset<std::string> tuples(const TablePaperAnnotation& paper, TableDimension dim) {
    std::multiset<std::string> out;
    constexpr char kSep = '\x1f';
    for (const auto& t : paper.tables) {
        std::string caption = norm(t.caption);
        if (dim == TableDimension::caption) {
            out.insert(caption);
            continue;
        }
        for (const auto& c : t.cells) {
            std::string key = norm_value(c.value);
            if (dim == TableDimension::value_bold_caption || dim == TableDimension::value_bold_row_column_caption)
                key += kSep + std::string(c.bold ? "1" : "0");
            if (dim == TableDimension::value_row_caption || dim == TableDimension::value_bold_row_column_caption)
                key += kSep + norm(c.row_label);
            if (dim == TableDimension::value_column_caption || dim == TableDimension::value_bold_row_column_caption) {
                key += kSep;
                for (const auto& h : c.column_labels) key += norm(h) + '\x1e';
            }
            key += kSep + caption;
            out.insert(std::move(key));
        }
    }
    return out;
}

Counts compare(const std::multiset<std::string>& predicted, const std::multiset<std::string>& gold) {
    std::vector<std::string> common;
    std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(), std::back_inserter(common));
    Counts c;
    c.tp = common.size();
    c.fp = predicted.size() - c.tp;
    c.fn = gold.size() - c.tp;
    return c;
}

}  // namespace

std::string_view dimension_label(TableDimension d) {
    switch (d) {
        case TableDimension::caption: return "Table caption";
        case TableDimension::value_bold_caption: return "Numeric value + IsBolded + Table caption";
        case TableDimension::value_row_caption: return "Numeric value + Row label + Table caption";
        case TableDimension::value_column_caption: return "Numeric value + Column label + Table caption";
        case TableDimension::value_bold_row_column_caption:
            return "Numeric value + IsBolded + Row label + Column label + Table caption";
    }
    return "";
}

TableEvalReport evaluate_table_parser(const std::vector<TablePaperAnnotation>& extracted,
                                      const std::vector<TablePaperAnnotation>& gold) {
    std::map<std::string, const TablePaperAnnotation*> ex, gd;
    for (const auto& p : extracted)
        if (!ex.emplace(p.doc_id, &p).second) throw MismatchError("duplicate extracted doc_id " + p.doc_id);
    for (const auto& p : gold)
        if (!gd.emplace(p.doc_id, &p).second) throw MismatchError("duplicate gold doc_id " + p.doc_id);
    for (const auto& [id, _] : ex)
        if (!gd.count(id)) throw MismatchError("extracted doc_id " + id + " has no gold annotation");
    for (const auto& [id, _] : gd)
        if (!ex.count(id)) throw MismatchError("gold doc_id " + id + " missing from extracted tables");

    TableEvalReport report;
    if (gd.empty()) return report;
    for (std::size_t d = 0; d < kTableDimensions.size(); ++d) {
        PrfScores sum;
        for (const auto& [id, g] : gd) {
            PrfScores s = prf(compare(tuples(*ex.at(id), kTableDimensions[d]), tuples(*g, kTableDimensions[d])));
            sum.precision += s.precision;
            sum.recall += s.recall;
            sum.f1 += s.f1;
        }
        const double n = static_cast<double>(gd.size());
        report.rows[d] = {sum.precision / n, sum.recall / n, sum.f1 / n};
    }
    return report;
}

std::string render_table_eval(const TableEvalReport& report) {
    std::ostringstream out;
    std::size_t width = 0;
    for (auto d : kTableDimensions) width = std::max(width, dimension_label(d).size());
    auto pad = [&](std::string_view s) { return std::string(s) + std::string(width - s.size() + 2, ' '); };
    auto num = [](double v) {
        std::string s = format_1dp(v);
        return std::string(s.size() < 8 ? 8 - s.size() : 0, ' ') + s;
    };
    out << pad("") << " Macro P" << " Macro R" << "Macro F1" << '\n';
    for (auto d : kTableDimensions) {
        const auto& r = report[d];
        out << pad(dimension_label(d)) << num(r.precision) << num(r.recall) << num(r.f1) << '\n';
    }
    return out.str();
}

}  // namespace tdms
