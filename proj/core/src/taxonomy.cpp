#include "tdms/taxonomy.hpp"

#include <algorithm>

#include "detail/builtin_data.hpp"
#include "tdms/error.hpp"
#include "tdms/io.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

std::string label_key(std::string_view s) { return text::fold_case(text::squash_whitespace(text::nfc(s))); }

std::string clean(std::string_view s) { return text::squash_whitespace(text::nfc(s)); }

std::size_t index_of(LabelField f) { return static_cast<std::size_t>(f); }

void check_field(std::string_view value, std::string_view what) {
    if (text::trim(value).empty()) throw LabelError(std::string(what) + " is empty");
    if (value.find(';') != std::string_view::npos)
        throw LabelError(std::string(what) + " '" + std::string(value) + "' contains ';'");
}

// Splits TSV text into non-empty, non-comment lines, keeping 1-based numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> tsv_rows(std::string_view tsv) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::size_t n = 0;
    for (auto line : text::split(tsv, '\n')) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        rows.emplace_back(n, text::split(line, '\t'));
    }
    return rows;
}

std::optional<NumericValue> parse_score(std::string_view s, std::size_t line) {
    std::string t = text::trim(s);
    if (t == "-" || t.empty()) return std::nullopt;
    auto v = detect_numeric(t);
    if (!v) throw FormatError("line " + std::to_string(line) + ": bad score '" + t + "'");
    return v;
}

std::vector<GoldAnnotation> finish(std::map<std::string, GoldAnnotation>& by_doc) {
    std::vector<GoldAnnotation> out;
    for (auto& [id, a] : by_doc) {
        a.unknown_flag = a.triples.empty();
        out.push_back(std::move(a));
    }
    return out;
}

void add_triple(GoldAnnotation& a, ScoredTriple st) {
    for (const auto& existing : a.triples)
        if (existing.triple == st.triple) return;  // keep the first (best) entry per leaderboard
    a.triples.push_back(std::move(st));
}

}  // namespace

void validate(const TdmTriple& t) {
    check_field(t.task, "task");
    check_field(t.dataset, "dataset");
    check_field(t.metric, "metric");
}

void validate(const DmPair& p) {
    check_field(p.dataset, "dataset");
    check_field(p.metric, "metric");
}

TdmTriple parse_triple(std::string_view s) {
    auto parts = text::split(s, ';');
    if (parts.size() != 3) throw LabelError("expected 'task;dataset;metric', got '" + std::string(s) + "'");
    TdmTriple t{clean(parts[0]), clean(parts[1]), clean(parts[2])};
    validate(t);
    return t;
}

std::string_view field_name(LabelField f) {
    switch (f) {
        case LabelField::task: return "task";
        case LabelField::dataset: return "dataset";
        case LabelField::metric: return "metric";
    }
    return "";
}

LabelField parse_field(std::string_view s) {
    std::string k = label_key(s);
    if (k == "task") return LabelField::task;
    if (k == "dataset") return LabelField::dataset;
    if (k == "metric") return LabelField::metric;
    throw FormatError("unknown label field '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// AliasTable

void AliasTable::add(LabelField field, std::string_view surface, std::string_view canonical) {
    auto& aliases = by_field_[index_of(field)];
    auto& canon = canonical_[index_of(field)];
    const std::string c = clean(canonical);
    const std::string ck = label_key(c);
    const std::string sk = label_key(surface);
    if (c.empty() || sk.empty()) throw LabelError("empty alias entry");

    if (auto it = canon.find(ck); it != canon.end() && it->second != c)
        throw LabelError("canonical '" + c + "' conflicts with '" + it->second + "'");
    if (auto it = aliases.find(ck); it != aliases.end() && it->second != c)
        throw LabelError("canonical '" + c + "' is already an alias of '" + it->second + "'");
    if (auto it = canon.find(sk); it != canon.end() && it->second != c)
        throw LabelError("surface '" + std::string(surface) + "' is itself canonical ('" + it->second + "')");
    if (auto it = aliases.find(sk); it != aliases.end() && it->second != c)
        throw LabelError("surface '" + std::string(surface) + "' already maps to '" + it->second + "'");

    entries_.push_back(std::string(field_name(field)) + '\t' + clean(surface) + '\t' + c);
    aliases[sk] = c;
    aliases[ck] = c;
    canon[ck] = c;

    auto from = text::word_tokens(surface);
    auto to = text::word_tokens(c);
    if (!from.empty() && from != to) {
        token_rules_[from] = to;
        longest_rule_ = std::max(longest_rule_, from.size());
    }
}

std::string AliasTable::normalize(std::string_view surface, LabelField field) const {
    const auto& aliases = by_field_[index_of(field)];
    if (auto it = aliases.find(label_key(surface)); it != aliases.end()) return it->second;
    return clean(surface);
}

std::vector<std::string> AliasTable::canonicalize_tokens(const std::vector<std::string>& tokens) const {
    if (token_rules_.empty()) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
        bool replaced = false;
        for (std::size_t len = std::min(longest_rule_, tokens.size() - i); len > 0; --len) {
            std::vector<std::string> window(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                            tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
            if (auto it = token_rules_.find(window); it != token_rules_.end()) {
                out.insert(out.end(), it->second.begin(), it->second.end());
                i += len;
                replaced = true;
                break;
            }
        }
        if (!replaced) out.push_back(tokens[i++]);
    }
    return out;
}

std::size_t AliasTable::size() const noexcept { return entries_.size(); }

std::string AliasTable::to_tsv() const {
    std::string out;
    for (const auto& e : entries_) out += e + '\n';
    return out;
}

AliasTable AliasTable::load_tsv(std::string_view tsv) {
    AliasTable table;
    for (const auto& [line, cols] : tsv_rows(tsv)) {
        if (cols.size() != 3) throw FormatError("aliases line " + std::to_string(line) + ": expected 3 columns");
        table.add(parse_field(cols[0]), cols[1], cols[2]);
    }
    return table;
}

AliasTable AliasTable::from_file(const std::string& path) { return load_tsv(io::read_file(path)); }

AliasTable AliasTable::builtin() {
    static const AliasTable table = load_tsv(builtin::kAliasesTsv);
    return table;
}

std::string normalize_label(std::string_view surface, LabelField field, const AliasTable& aliases) {
    return aliases.normalize(surface, field);
}

TdmTriple normalize_triple(const TdmTriple& t, const AliasTable& aliases) {
    return {aliases.normalize(t.task, LabelField::task), aliases.normalize(t.dataset, LabelField::dataset),
            aliases.normalize(t.metric, LabelField::metric)};
}

// ---------------------------------------------------------------------------
// Annotation sets

FilteredAnnotations filter_low_support(const std::vector<GoldAnnotation>& annotations, std::size_t min_papers) {
    if (min_papers == 0) throw InvalidArgument("min_papers must be at least 1");
    std::map<TdmTriple, std::set<std::string>> support;
    for (const auto& a : annotations)
        for (const auto& st : a.triples) support[st.triple].insert(a.doc_id);

    FilteredAnnotations out;
    for (const auto& [t, docs] : support)
        if (docs.size() >= min_papers) out.label_space.insert(t);
    for (const auto& a : annotations) {
        GoldAnnotation kept{a.doc_id, {}, false};
        for (const auto& st : a.triples)
            if (out.label_space.count(st.triple)) kept.triples.push_back(st);
        kept.unknown_flag = kept.triples.empty();
        out.annotations.push_back(std::move(kept));
    }
    return out;
}

LabelSpace label_space_of(const std::vector<GoldAnnotation>& annotations) {
    LabelSpace space;
    for (const auto& a : annotations)
        for (const auto& st : a.triples) space.insert(st.triple);
    return space;
}

LabelSpace label_space_of(const std::vector<GoldAnnotation>& annotations, const std::set<std::string>& doc_ids) {
    LabelSpace space;
    for (const auto& a : annotations)
        if (doc_ids.count(a.doc_id))
            for (const auto& st : a.triples) space.insert(st.triple);
    return space;
}

std::vector<GoldAnnotation> parse_annotations_tsv(std::string_view tsv) {
    std::map<std::string, GoldAnnotation> by_doc;
    std::set<std::string> unknown_docs;
    for (const auto& [line, cols] : tsv_rows(tsv)) {
        if (cols.size() == 5 && cols[0] == "doc_id" && cols[1] == "task") continue;
        if (cols.size() != 5) throw FormatError("annotations line " + std::to_string(line) + ": expected 5 columns");
        const std::string doc = text::trim(cols[0]);
        if (doc.empty()) throw FormatError("annotations line " + std::to_string(line) + ": empty doc_id");
        auto& a = by_doc[doc];
        a.doc_id = doc;
        if (text::trim(cols[1]) == "Unknown") {
            unknown_docs.insert(doc);
            continue;
        }
        TdmTriple t{clean(cols[1]), clean(cols[2]), clean(cols[3])};
        try {
            validate(t);
        } catch (const LabelError& e) {
            throw LabelError("annotations line " + std::to_string(line) + ": " + e.what());
        }
        add_triple(a, {std::move(t), parse_score(cols[4], line)});
    }
    for (const auto& doc : unknown_docs)
        if (!by_doc[doc].triples.empty()) throw FormatError("doc " + doc + " is both Unknown and annotated");
    return finish(by_doc);
}

std::string annotations_to_tsv(const std::vector<GoldAnnotation>& annotations) {
    std::vector<const GoldAnnotation*> sorted;
    for (const auto& a : annotations) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->doc_id < y->doc_id; });
    std::string out;
    for (const auto* a : sorted) {
        if (a->triples.empty()) {
            out += a->doc_id + "\tUnknown\t-\t-\t-\n";
            continue;
        }
        for (const auto& st : a->triples) {
            std::string score = st.score ? st.score->value.to_string() + (st.score->percent_flag ? "%" : "") : "-";
            out += a->doc_id + '\t' + st.triple.task + '\t' + st.triple.dataset + '\t' + st.triple.metric + '\t' +
                   score + '\n';
        }
    }
    return out;
}

std::vector<GoldAnnotation> parse_published_annotations(std::string_view input) {
    std::map<std::string, GoldAnnotation> by_doc;
    for (const auto& [line, cols] : tsv_rows(input)) {
        if (cols.size() < 2) throw FormatError("published annotations line " + std::to_string(line) + ": expected 2 columns");
        std::string doc = text::trim(cols[0]);
        if (auto dot = doc.rfind('.'); dot != std::string::npos && dot > 0) doc = doc.substr(0, dot);
        auto& a = by_doc[doc];
        a.doc_id = doc;
        std::string body = text::trim(cols[1]);
        if (text::fold_case(body).starts_with("unknow")) continue;
        for (const auto& item : text::split(body, '$')) {
            if (text::trim(item).empty()) continue;
            auto parts = text::split(item, '#');
            if (parts.size() < 3)
                throw FormatError("published annotations line " + std::to_string(line) + ": bad entry '" + item + "'");
            TdmTriple t{clean(parts[0]), clean(parts[1]), clean(parts[2])};
            validate(t);
            std::optional<NumericValue> score;
            if (parts.size() > 3) score = detect_numeric(parts[3]);
            add_triple(a, {std::move(t), score});
        }
    }
    return finish(by_doc);
}

std::vector<GoldAnnotation> normalize_annotations(const std::vector<GoldAnnotation>& annotations,
                                                  const AliasTable& aliases) {
    std::vector<GoldAnnotation> out;
    for (const auto& a : annotations) {
        GoldAnnotation n{a.doc_id, {}, false};
        for (const auto& st : a.triples) add_triple(n, {normalize_triple(st.triple, aliases), st.score});
        n.unknown_flag = n.triples.empty();
        out.push_back(std::move(n));
    }
    return out;
}

std::map<std::string, const GoldAnnotation*> index_by_doc(const std::vector<GoldAnnotation>& annotations) {
    std::map<std::string, const GoldAnnotation*> idx;
    for (const auto& a : annotations)
        if (!idx.emplace(a.doc_id, &a).second) throw FormatError("duplicate annotation for doc " + a.doc_id);
    return idx;
}

}  // namespace tdms
