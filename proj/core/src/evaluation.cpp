#include "tdms/evaluation.hpp"

#include <algorithm>
#include <cstdio>

#include "tdms/error.hpp"

namespace tdms {

namespace {

// Predictions keyed by doc_id, triples deduplicated (first occurrence wins).
std::map<std::string, std::vector<const TdmsTuple*>> index_predictions(const std::vector<PaperPrediction>& predictions) {
    std::map<std::string, std::vector<const TdmsTuple*>> out;
    for (const auto& p : predictions) {
        auto [it, inserted] = out.try_emplace(p.doc_id);
        if (!inserted) throw MismatchError("duplicate prediction entry for paper '" + p.doc_id + "'");
        std::set<TdmTriple> seen;
        for (const auto& t : p.tuples)
            if (seen.insert(t.triple).second) it->second.push_back(&t);
    }
    return out;
}

void check_same_papers(const std::map<std::string, std::vector<const TdmsTuple*>>& pred,
                       const std::map<std::string, const GoldAnnotation*>& gold) {
    for (const auto& [id, _] : pred)
        if (!gold.count(id)) throw MismatchError("paper '" + id + "' is predicted but has no gold annotation");
    for (const auto& [id, _] : gold)
        if (!pred.count(id)) throw MismatchError("paper '" + id + "' has a gold annotation but no prediction");
}

bool gold_unknown(const GoldAnnotation& g) { return g.unknown_flag || g.triples.empty(); }

struct Accumulator {
    Counts micro;
    double sum_p = 0, sum_r = 0, sum_f = 0;
    std::size_t papers = 0;

    void add(const Counts& c) {
        micro += c;
        const auto s = prf(c);
        sum_p += s.precision;
        sum_r += s.recall;
        sum_f += s.f1;
        ++papers;
    }

    EvalReport report(EvalSetting setting) const {
        EvalReport r;
        r.setting = setting;
        r.papers = papers;
        if (papers) {
            const double n = static_cast<double>(papers);
            r.macro_p = sum_p / n;
            r.macro_r = sum_r / n;
            r.macro_f1 = sum_f / n;
        }
        const auto m = prf(micro);
        r.micro_p = m.precision;
        r.micro_r = m.recall;
        r.micro_f1 = m.f1;
        return r;
    }
};

std::string setting_name(EvalSetting s) {
    switch (s) {
        case EvalSetting::a: return "a";
        case EvalSetting::b: return "b";
        case EvalSetting::c: return "c";
    }
    return "?";
}

std::string pct(double v) { return format_1dp(v); }

}  // namespace

EvalSetting parse_setting(std::string_view s) {
    if (s == "a") return EvalSetting::a;
    if (s == "b") return EvalSetting::b;
    if (s == "c") return EvalSetting::c;
    throw InvalidArgument("unknown evaluation setting '" + std::string(s) + "' (expected a, b or c)");
}

EvalReport evaluate_tdm(const std::vector<PaperPrediction>& predictions, const std::vector<GoldAnnotation>& gold,
                        EvalSetting setting) {
    if (setting == EvalSetting::c) return evaluate_tdms(predictions, gold);
    const auto pred = index_predictions(predictions);
    const auto gold_ix = index_by_doc(gold);
    check_same_papers(pred, gold_ix);

    Accumulator acc;
    for (const auto& [id, g] : gold_ix) {
        const bool g_unknown = gold_unknown(*g);
        if (g_unknown && setting == EvalSetting::b) continue;
        const auto& p = pred.at(id);
        Counts c;
        if (g_unknown && p.empty()) {
            c.tp = 1;
        } else if (g_unknown) {
            c.fp = p.size();
        } else if (p.empty()) {
            c.fn = g->triples.size();
        } else {
            std::set<TdmTriple> gs;
            for (const auto& st : g->triples) gs.insert(st.triple);
            for (const auto* t : p) (gs.count(t->triple) ? c.tp : c.fp) += 1;
            c.fn = gs.size() - c.tp;
        }
        acc.add(c);
    }
    return acc.report(setting);
}

EvalReport evaluate_tdms(const std::vector<PaperPrediction>& predictions, const std::vector<GoldAnnotation>& gold) {
    const auto pred = index_predictions(predictions);
    const auto gold_ix = index_by_doc(gold);
    check_same_papers(pred, gold_ix);

    Accumulator acc;
    for (const auto& [id, g] : gold_ix) {
        if (gold_unknown(*g)) continue;
        const auto& p = pred.at(id);
        std::map<TdmTriple, const ScoredTriple*> gs;
        for (const auto& st : g->triples) gs.emplace(st.triple, &st);
        Counts c;
        for (const auto* t : p) {
            auto it = gs.find(t->triple);
            bool ok = false;
            if (it != gs.end()) {
                const auto& want = it->second->score;
                ok = !want || (t->score && match_score(want->value, *t->score, t->score_percent, want->percent_flag));
            }
            (ok ? c.tp : c.fp) += 1;
        }
        c.fn = gs.size() - c.tp;
        acc.add(c);
    }
    return acc.report(EvalSetting::c);
}

EvalReport evaluate(const std::vector<PaperPrediction>& predictions, const std::vector<GoldAnnotation>& gold,
                    EvalSetting setting) {
    return setting == EvalSetting::c ? evaluate_tdms(predictions, gold) : evaluate_tdm(predictions, gold, setting);
}

PkRow precision_at_k(const Leaderboard& board, const std::set<std::string>& relevant,
                     const std::vector<std::size_t>& ks) {
    PkRow row{board.triple, {}};
    for (auto k : ks) {
        if (k == 0) throw InvalidArgument("P@k needs k >= 1");
        std::size_t hits = 0;
        for (std::size_t i = 0; i < std::min(k, board.rows.size()); ++i) hits += relevant.count(board.rows[i].doc_id);
        row.at[k] = static_cast<double>(hits) / static_cast<double>(k);
    }
    return row;
}

PkReport pk_report(std::vector<PkRow> rows, const std::vector<std::size_t>& ks) {
    PkReport report{ks, std::move(rows), {}};
    for (auto k : ks) {
        double sum = 0;
        for (const auto& r : report.rows) sum += r.at.at(k);
        report.macro[k] = report.rows.empty() ? 0.0 : sum / static_cast<double>(report.rows.size());
    }
    return report;
}

std::vector<AblationRow> run_ablation(const std::vector<RawDocument>& test_docs, const std::vector<GoldAnnotation>& gold,
                                      const LabelSpace& candidates, const std::vector<AblationArm>& arms,
                                      double threshold) {
    auto order = [](const ReprConfig& c) { return int(c.include_exp_setup) + 2 * int(c.include_table_info); };
    std::set<int> seen;
    for (const auto& arm : arms) {
        if (!arm.tdm_scorer || !arm.dm_scorer) throw InvalidArgument("ablation arm without a scorer");
        if (!(arm.config == arm.trained_with))
            throw MismatchError("ablation arm '" + config_label(arm.config) + "' uses a scorer trained with '" +
                                config_label(arm.trained_with) + "'");
        if (!seen.insert(order(arm.config)).second)
            throw InvalidArgument("duplicate ablation arm '" + config_label(arm.config) + "'");
    }

    std::vector<const AblationArm*> sorted;
    for (const auto& arm : arms) sorted.push_back(&arm);
    std::sort(sorted.begin(), sorted.end(), [&](auto a, auto b) { return order(a->config) < order(b->config); });

    std::vector<AblationRow> out;
    for (const auto* arm : sorted) {
        validate(arm->config);
        std::vector<PaperRepr> papers;
        for (const auto& doc : test_docs)
            papers.push_back({doc.doc_id, build_doctaet(doc, arm->config), build_score_contexts(doc, arm->config)});
        const auto preds = predict_corpus(papers, candidates, *arm->tdm_scorer, *arm->dm_scorer, threshold);
        out.push_back({config_label(arm->config), evaluate_tdm(preds, gold, EvalSetting::a)});
    }
    return out;
}

std::string render_eval_text(const std::vector<std::pair<std::string, EvalReport>>& rows) {
    std::size_t width = 6;
    for (const auto& [label, _] : rows) width = std::max(width, label.size());
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %7s %7s %7s  %7s %7s %7s  %6s\n", int(width), "Model", "MacroP", "MacroR",
                  "MacroF1", "MicroP", "MicroR", "MicroF1", "Papers");
    out += buf;
    for (const auto& [label, r] : rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %7s %7s %7s  %7s %7s %7s  %6zu\n", int(width), label.c_str(),
                      pct(r.macro_p).c_str(), pct(r.macro_r).c_str(), pct(r.macro_f1).c_str(), pct(r.micro_p).c_str(),
                      pct(r.micro_r).c_str(), pct(r.micro_f1).c_str(), r.papers);
        out += buf;
    }
    return out;
}

std::string render_eval_tsv(const std::vector<std::pair<std::string, EvalReport>>& rows) {
    std::string out = "model\tsetting\tmacro_p\tmacro_r\tmacro_f1\tmicro_p\tmicro_r\tmicro_f1\tpapers\n";
    for (const auto& [label, r] : rows) {
        out += label + '\t' + setting_name(r.setting) + '\t' + pct(r.macro_p) + '\t' + pct(r.macro_r) + '\t' +
               pct(r.macro_f1) + '\t' + pct(r.micro_p) + '\t' + pct(r.micro_r) + '\t' + pct(r.micro_f1) + '\t' +
               std::to_string(r.papers) + '\n';
    }
    return out;
}

namespace {

std::string triple_text(const TdmTriple& t) { return t.task + ";" + t.dataset + ";" + t.metric; }

}  // namespace

std::string render_pk_text(const PkReport& report) {
    std::size_t width = 5;
    for (const auto& r : report.rows) width = std::max(width, triple_text(r.triple).size());
    std::string out;
    char buf[64];
    auto cell = [&](const std::string& s) {
        std::snprintf(buf, sizeof buf, "  %7s", s.c_str());
        out += buf;
    };
    auto label = [&](const std::string& s) { out += s + std::string(width - s.size(), ' '); };
    label("Triple");
    for (auto k : report.ks) cell("P@" + std::to_string(k));
    out += '\n';
    for (const auto& r : report.rows) {
        label(triple_text(r.triple));
        for (auto k : report.ks) cell(pct(100.0 * r.at.at(k)));
        out += '\n';
    }
    label("Macro");
    for (auto k : report.ks) cell(pct(100.0 * report.macro.at(k)));
    out += '\n';
    return out;
}

std::string render_pk_tsv(const PkReport& report) {
    std::string out = "triple";
    for (auto k : report.ks) out += "\tp@" + std::to_string(k);
    out += '\n';
    for (const auto& r : report.rows) {
        out += triple_text(r.triple);
        for (auto k : report.ks) out += '\t' + pct(100.0 * r.at.at(k));
        out += '\n';
    }
    out += "macro";
    for (auto k : report.ks) out += '\t' + pct(100.0 * report.macro.at(k));
    out += '\n';
    return out;
}

}  // namespace tdms
