#include "tdms/instances.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "detail/random.hpp"
#include "json.hpp"
#include "tdms/table.hpp"
#include "tdms/error.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

std::vector<const PaperRepr*> sorted_papers(const std::vector<PaperRepr>& papers) {
    std::vector<const PaperRepr*> out;
    for (const auto& p : papers) out.push_back(&p);
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
    return out;
}

std::string triple_text(const TdmTriple& t) { return t.task + ";" + t.dataset + ";" + t.metric; }

}  // namespace

std::vector<EntailmentInstance> gen_tdm_instances(const std::vector<PaperRepr>& papers,
                                                  const std::vector<GoldAnnotation>& annotations,
                                                  const LabelSpace& label_space, bool include_unknown) {
    auto gold = index_by_doc(annotations);
    for (const auto& a : annotations)
        for (const auto& st : a.triples)
            if (!label_space.count(st.triple))
                throw LabelError("doc " + a.doc_id + ": triple " + triple_text(st.triple) + " is outside the label space");

    std::vector<std::string> hypotheses;
    for (const auto& t : label_space) hypotheses.push_back(serialize_hypothesis(t));

    std::vector<EntailmentInstance> out;
    for (const PaperRepr* paper : sorted_papers(papers)) {
        auto it = gold.find(paper->doc_id);
        if (it == gold.end()) continue;
        const GoldAnnotation& a = *it->second;
        if (a.triples.empty() && !include_unknown) continue;
        const std::string context = text::flatten_line(paper->doctaet.rendered);
        if (text::trim(context).empty()) continue;
        std::size_t i = 0;
        for (const auto& t : label_space) {
            bool positive = std::any_of(a.triples.begin(), a.triples.end(), [&](const auto& st) { return st.triple == t; });
            out.push_back({context, hypotheses[i++], positive, paper->doc_id, InstanceOrigin::tdm});
        }
    }
    return out;
}

bool match_score(const Decimal& annotated, const Decimal& cell_value, bool cell_percent, bool annotated_percent) {
    if (annotated == cell_value) return true;
    if (cell_percent == annotated_percent) return false;
    const Decimal one(1, 0);
    // the side without a percent sign may be written as a fraction
    if (cell_percent && annotated <= one) return annotated.scaled_by_pow10(2) == cell_value;
    if (annotated_percent && cell_value <= one) return cell_value.scaled_by_pow10(2) == annotated;
    return false;
}

NegativePolicy NegativePolicy::parse(std::string_view s) {
    if (s == "all") return all();
    if (s.starts_with("sampled:")) {
        try {
            std::size_t pos = 0;
            std::string num(s.substr(8));
            auto k = std::stoul(num, &pos);
            if (pos == num.size() && k > 0) return sampled(k);
        } catch (const std::exception&) {
        }
    }
    throw InvalidArgument("negative policy must be 'all' or 'sampled:K' with K > 0, got '" + std::string(s) + "'");
}

std::set<DmPair> dm_space_of(const LabelSpace& label_space) {
    std::set<DmPair> out;
    for (const auto& t : label_space) out.insert(t.dm());
    return out;
}

std::vector<EntailmentInstance> gen_dm_instances(const std::vector<PaperRepr>& papers,
                                                 const std::vector<GoldAnnotation>& annotations,
                                                 const std::set<DmPair>& dm_space, NegativePolicy policy,
                                                 std::uint64_t seed) {
    auto gold = index_by_doc(annotations);
    for (const auto& a : annotations)
        for (const auto& st : a.triples)
            if (st.score && !dm_space.count(st.triple.dm()))
                throw LabelError("doc " + a.doc_id + ": DM pair " + st.triple.dataset + ";" + st.triple.metric +
                                 " is outside the DM space");

    const std::vector<DmPair> pairs(dm_space.begin(), dm_space.end());
    std::vector<std::string> hypotheses;
    for (const auto& p : pairs) hypotheses.push_back(serialize_hypothesis(p));
    std::mt19937_64 rng(seed);

    std::vector<EntailmentInstance> out;
    for (const PaperRepr* paper : sorted_papers(papers)) {
        auto it = gold.find(paper->doc_id);
        if (it == gold.end()) continue;
        const GoldAnnotation& a = *it->second;
        bool scored = std::any_of(a.triples.begin(), a.triples.end(), [](const auto& st) { return st.score.has_value(); });
        if (!scored) continue;

        for (const ScoreContext& sc : paper->contexts) {
            const std::string context = text::flatten_line(sc.rendered);
            if (text::trim(context).empty()) continue;
            std::set<DmPair> matched;
            for (const auto& st : a.triples)
                if (st.score && match_score(st.score->value, sc.value, sc.percent_flag, st.score->percent_flag))
                    matched.insert(st.triple.dm());

            auto emit = [&](std::size_t j, bool label) {
                out.push_back({context, hypotheses[j], label, paper->doc_id, InstanceOrigin::dm});
            };
            if (!matched.empty() || policy.kind == NegativePolicy::Kind::all) {
                for (std::size_t j = 0; j < pairs.size(); ++j) emit(j, matched.count(pairs[j]) > 0);
                continue;
            }
            // sampled negatives: partial Fisher-Yates over pair indices
            std::vector<std::size_t> idx(pairs.size());
            std::iota(idx.begin(), idx.end(), 0);
            const std::size_t k = std::min(policy.k, idx.size());
            for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + detail::draw(rng, idx.size() - i)]);
            idx.resize(k);
            std::sort(idx.begin(), idx.end());
            for (auto j : idx) emit(j, false);
        }
    }
    return out;
}

std::string instances_to_tsv(const std::vector<EntailmentInstance>& instances) {
    std::string out;
    for (const auto& in : instances) {
        out += in.label ? '1' : '0';
        out += '\t';
        out += in.origin == InstanceOrigin::tdm ? "tdm" : "dm";
        out += '\t' + text::flatten_line(in.doc_id) + '\t' + text::flatten_line(in.hypothesis) + '\t' +
               text::flatten_line(in.context) + '\n';
    }
    return out;
}

std::vector<EntailmentInstance> instances_from_tsv(std::string_view tsv) {
    std::vector<EntailmentInstance> out;
    std::size_t n = 0;
    for (auto line : text::split(tsv, '\n')) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 5) throw FormatError("instances line " + std::to_string(n) + ": expected 5 columns");
        EntailmentInstance in;
        if (cols[0] != "0" && cols[0] != "1") throw FormatError("instances line " + std::to_string(n) + ": bad label");
        in.label = cols[0] == "1";
        if (cols[1] == "tdm") {
            in.origin = InstanceOrigin::tdm;
        } else if (cols[1] == "dm") {
            in.origin = InstanceOrigin::dm;
        } else {
            throw FormatError("instances line " + std::to_string(n) + ": bad origin '" + cols[1] + "'");
        }
        in.doc_id = cols[2];
        in.hypothesis = cols[3];
        in.context = cols[4];
        if (in.context.empty() || in.hypothesis.empty())
            throw FormatError("instances line " + std::to_string(n) + ": empty context or hypothesis");
        out.push_back(std::move(in));
    }
    return out;
}

PaperRepr make_paper_repr(const RawDocument& doc, const ReprConfig& config) {
    return {doc.doc_id, build_doctaet(doc, config), build_score_contexts(doc, config)};
}

namespace {

using ojson = nlohmann::ordered_json;

}  // namespace

std::string to_json_line(const PaperRepr& paper) {
    const auto& d = paper.doctaet;
    ojson j;
    j["doc_id"] = paper.doc_id;
    j["doctaet"] = {{"title", d.title},
                    {"abstract", d.abstract},
                    {"exp_setup", d.exp_setup},
                    {"table_info", d.table_info},
                    {"config", ojson::parse(to_json(d.config))},
                    {"rendered", d.rendered}};
    ojson contexts = ojson::array();
    for (const auto& sc : paper.contexts) {
        contexts.push_back({{"table_id", sc.table_id},
                            {"row", sc.row},
                            {"col", sc.col},
                            {"value", sc.value.to_string() + (sc.percent_flag ? "%" : "")},
                            {"bold", sc.is_bold},
                            {"headers", sc.headers},
                            {"caption", sc.caption},
                            {"rendered", sc.rendered}});
    }
    j["contexts"] = contexts;
    return j.dump();
}

PaperRepr paper_repr_from_json(std::string_view text) {
    try {
        const auto j = ojson::parse(text);
        PaperRepr p;
        p.doc_id = j.at("doc_id").get<std::string>();
        const auto& d = j.at("doctaet");
        p.doctaet = {p.doc_id,
                     d.at("title").get<std::string>(),
                     d.at("abstract").get<std::string>(),
                     d.at("exp_setup").get<std::string>(),
                     d.at("table_info").get<std::string>(),
                     repr_config_from_json(d.at("config").dump()),
                     d.at("rendered").get<std::string>()};
        for (const auto& c : j.at("contexts")) {
            ScoreContext sc;
            sc.doc_id = p.doc_id;
            sc.table_id = c.at("table_id").get<std::string>();
            sc.row = c.at("row").get<std::size_t>();
            sc.col = c.at("col").get<std::size_t>();
            auto v = detect_numeric(c.at("value").get<std::string>());
            if (!v) throw FormatError("score context value is not numeric");
            sc.value = v->value;
            sc.percent_flag = v->percent_flag;
            sc.is_bold = c.at("bold").get<bool>();
            sc.headers = c.at("headers").get<std::vector<std::string>>();
            sc.caption = c.at("caption").get<std::string>();
            sc.rendered = c.at("rendered").get<std::string>();
            p.contexts.push_back(std::move(sc));
        }
        return p;
    } catch (const ojson::parse_error& e) {
        throw ParseError(std::string("paper representation: ") + e.what(), e.byte);
    } catch (const ojson::exception& e) {
        throw FormatError(std::string("paper representation: ") + e.what());
    }
}

std::string papers_to_jsonl(const std::vector<PaperRepr>& papers) {
    std::string out;
    for (const auto& p : papers) out += to_json_line(p) + '\n';
    return out;
}

std::vector<PaperRepr> papers_from_jsonl(std::string_view jsonl) {
    std::vector<PaperRepr> out;
    for (const auto& line : text::split(jsonl, '\n'))
        if (!text::trim(line).empty()) out.push_back(paper_repr_from_json(line));
    return out;
}

}  // namespace tdms
