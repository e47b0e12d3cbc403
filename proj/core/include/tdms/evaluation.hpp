#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/inference.hpp"
#include "tdms/metrics.hpp"
#include "tdms/representation.hpp"
#include "tdms/scorer.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

enum class EvalSetting { a, b, c };
EvalSetting parse_setting(std::string_view s);

/// Percentages, unrounded; rounding happens only when rendering.
struct EvalReport {
    EvalSetting setting = EvalSetting::a;
    double macro_p = 0, macro_r = 0, macro_f1 = 0;
    double micro_p = 0, micro_r = 0, micro_f1 = 0;
    std::size_t papers = 0;
};

/// Setting a: every paper, with "Unknown" as a pseudo-label that only scores a
/// true positive when both sides are Unknown. Setting b: Unknown-gold papers
/// removed first. Throws MismatchError when doc_id sets differ.
EvalReport evaluate_tdm(const std::vector<PaperPrediction>& predictions,
                        const std::vector<GoldAnnotation>& gold, EvalSetting setting);

/// Setting c: Unknown-gold papers removed; an item is correct only when the
/// triple and the score both match. Gold items without a score are matched
/// on the triple alone.
EvalReport evaluate_tdms(const std::vector<PaperPrediction>& predictions,
                         const std::vector<GoldAnnotation>& gold);

EvalReport evaluate(const std::vector<PaperPrediction>& predictions,
                    const std::vector<GoldAnnotation>& gold, EvalSetting setting);

struct PkRow {
    TdmTriple triple;
    std::map<std::size_t, double> at;  // k -> P@k in [0,1]
};

struct PkReport {
    std::vector<std::size_t> ks;
    std::vector<PkRow> rows;
    std::map<std::size_t, double> macro;
};

/// |top-k ∩ relevant| / k; rows missing from a short leaderboard count as wrong.
PkRow precision_at_k(const Leaderboard& board, const std::set<std::string>& relevant,
                     const std::vector<std::size_t>& ks);

PkReport pk_report(std::vector<PkRow> rows, const std::vector<std::size_t>& ks);

/// One ablation arm: the representation config used at test time, the
/// scorer pair, and the config that scorer was trained with.
struct AblationArm {
    ReprConfig config;
    ReprConfig trained_with;
    const Scorer* tdm_scorer = nullptr;
    const Scorer* dm_scorer = nullptr;
};

struct AblationRow {
    std::string label;
    EvalReport report;
};

/// Rebuilds DocTAETs per arm, predicts and evaluates in setting a. Rows come
/// out in the fixed order TA, TA+E, TA+T, TA+E+T. Throws MismatchError when an
/// arm's scorer was trained with a different config, InvalidArgument on
/// duplicate arms.
std::vector<AblationRow> run_ablation(const std::vector<RawDocument>& test_docs,
                                      const std::vector<GoldAnnotation>& gold,
                                      const LabelSpace& candidates,
                                      const std::vector<AblationArm>& arms,
                                      double threshold = kDefaultThreshold);

std::string render_eval_text(const std::vector<std::pair<std::string, EvalReport>>& rows);
std::string render_eval_tsv(const std::vector<std::pair<std::string, EvalReport>>& rows);
std::string render_pk_text(const PkReport& report);
std::string render_pk_tsv(const PkReport& report);

}  // namespace tdms
