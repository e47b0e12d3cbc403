#include "tdms/representation.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using json = nlohmann::ordered_json;

std::string render_parts(const std::vector<std::string>& parts) {
    std::vector<std::string> kept;
    for (const auto& p : parts)
        if (!p.empty()) kept.push_back(p);
    return text::join(kept, " " + std::string(kPartMarker) + " ");
}

std::string_view sc_source_name(ScSource s) { return s == ScSource::bold_only ? "bold_only" : "all_numeric"; }

}  // namespace

void validate(const ReprConfig& config) {
    if (config.max_tokens == 0 || config.sc_max_tokens == 0) throw InvalidArgument("token budgets must be positive");
    if (config.part_truncate > config.max_tokens)
        throw InvalidArgument("part_truncate (" + std::to_string(config.part_truncate) + ") exceeds max_tokens (" +
                              std::to_string(config.max_tokens) + ")");
}

std::string config_label(const ReprConfig& config) {
    std::string label = "Title+Abstract";
    if (config.include_exp_setup) label += " + ExpSetup";
    if (config.include_table_info) label += " + TableInfo";
    return label;
}

ReprConfig repr_config_from_json(std::string_view input) {
    json j;
    try {
        j = json::parse(input);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("repr config: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw FormatError("repr config must be a JSON object");
    ReprConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "include_exp_setup") {
                c.include_exp_setup = value.get<bool>();
            } else if (key == "include_table_info") {
                c.include_table_info = value.get<bool>();
            } else if (key == "max_tokens") {
                c.max_tokens = value.get<std::size_t>();
            } else if (key == "part_truncate") {
                c.part_truncate = value.get<std::size_t>();
            } else if (key == "sc_max_tokens") {
                c.sc_max_tokens = value.get<std::size_t>();
            } else if (key == "sc_source") {
                auto s = value.get<std::string>();
                if (s == "bold_only") {
                    c.sc_source = ScSource::bold_only;
                } else if (s == "all_numeric") {
                    c.sc_source = ScSource::all_numeric;
                } else {
                    throw FormatError("sc_source must be bold_only or all_numeric");
                }
            } else {
                throw FormatError("unknown repr config field '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("repr config: ") + e.what());
    }
    validate(c);
    return c;
}

std::string to_json(const ReprConfig& c) {
    json j;
    j["include_exp_setup"] = c.include_exp_setup;
    j["include_table_info"] = c.include_table_info;
    j["max_tokens"] = c.max_tokens;
    j["part_truncate"] = c.part_truncate;
    j["sc_max_tokens"] = c.sc_max_tokens;
    j["sc_source"] = sc_source_name(c.sc_source);
    return j.dump(2) + "\n";
}

std::vector<std::string> extract_exp_setup(const RawDocument& doc, const ExpSetupRules& rules) {
    std::vector<std::vector<std::string>> cues;
    for (const auto& c : rules.cues) cues.push_back(text::word_tokens(c));
    std::vector<std::string> stems;
    for (const auto& s : rules.heading_stems) stems.push_back(text::fold_case(s));

    std::vector<std::string> out;
    for (const auto& section : doc.sections) {
        const std::string heading = text::fold_case(section.heading);
        bool experimental = std::any_of(stems.begin(), stems.end(),
                                        [&](const auto& s) { return heading.find(s) != std::string::npos; });
        if (!experimental) continue;
        for (const auto& sentence : section.sentences) {
            auto tokens = text::word_tokens(sentence);
            bool cued = std::any_of(cues.begin(), cues.end(),
                                    [&](const auto& cue) { return text::contains_sequence(tokens, cue); });
            if (cued) out.push_back(sentence);
        }
    }
    return out;
}

std::string table_info_text(const RawDocument& doc) {
    std::vector<std::string> parts;
    for (const auto& t : doc.tables) {
        if (!t.caption.empty()) parts.push_back(t.caption);
        std::set<std::string> seen;
        for (const auto& nc : t.numeric_cells)
            for (const auto& h : nc.column_headers)
                if (seen.insert(h).second) parts.push_back(h);
    }
    return text::squash_whitespace(text::join(parts, " "));
}

DocTAET build_doctaet(const RawDocument& doc, const ReprConfig& config, const ExpSetupRules& rules) {
    validate(config);
    DocTAET d;
    d.doc_id = doc.doc_id;
    d.config = config;
    d.title = text::squash_whitespace(doc.title);
    d.abstract = text::squash_whitespace(doc.abstract);
    std::string exp = text::squash_whitespace(text::join(extract_exp_setup(doc, rules), " "));
    std::string info = table_info_text(doc);

    // The over-budget test looks at the complete material, so switching a
    // part off can only remove tokens.
    if (text::token_count(render_parts({d.title, d.abstract, exp, info})) > config.max_tokens) {
        exp = text::first_tokens(exp, config.part_truncate);
        info = text::first_tokens(info, config.part_truncate);
    }
    d.exp_setup = config.include_exp_setup ? exp : std::string();
    d.table_info = config.include_table_info ? info : std::string();
    d.rendered = render_parts({d.title, d.abstract, d.exp_setup, d.table_info});
    if (text::token_count(d.rendered) > config.max_tokens) d.rendered = text::first_tokens(d.rendered, config.max_tokens);
    return d;
}

std::vector<ScoreContext> build_score_contexts(const RawDocument& doc, const ReprConfig& config) {
    std::vector<ScoreContext> out;
    for (const auto& t : doc.tables) {
        const ScSource source = t.no_bold_info ? ScSource::all_numeric : config.sc_source;
        for (const auto& nc : t.numeric_cells) {
            if (source == ScSource::bold_only && !nc.is_bold) continue;
            ScoreContext sc;
            sc.doc_id = doc.doc_id;
            sc.table_id = t.table_id;
            sc.row = nc.row;
            sc.col = nc.col;
            sc.value = nc.value;
            sc.percent_flag = nc.percent_flag;
            sc.is_bold = nc.is_bold;
            sc.headers = nc.column_headers;
            sc.caption = t.caption;
            std::vector<std::string> parts = sc.headers;
            parts.push_back(t.caption);
            sc.rendered = text::first_tokens(text::join(parts, " "), config.sc_max_tokens);
            out.push_back(std::move(sc));
        }
    }
    return out;
}

std::string serialize_hypothesis(const TdmTriple& t) { return t.task + " ; " + t.dataset + " ; " + t.metric; }

std::string serialize_hypothesis(const DmPair& p) { return p.dataset + " ; " + p.metric; }

}  // namespace tdms
