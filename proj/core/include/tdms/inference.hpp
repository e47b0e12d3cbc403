#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/instances.hpp"
#include "tdms/representation.hpp"
#include "tdms/scorer.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

inline constexpr double kDefaultThreshold = 0.5;

struct TdmPrediction {
    std::string doc_id;
    TdmTriple triple;
    double confidence = 0;
};

struct Provenance {
    std::string table_id;
    std::size_t row = 0;
    std::size_t col = 0;

    bool operator==(const Provenance&) const = default;
};

struct TdmsTuple {
    std::string doc_id;
    TdmTriple triple;
    double confidence = 0;
    std::optional<Decimal> score;
    bool score_percent = false;
    std::optional<double> score_confidence;
    std::optional<Provenance> provenance;
};

/// All tuples predicted for one paper. An empty list means "Unknown".
struct PaperPrediction {
    std::string doc_id;
    std::vector<TdmsTuple> tuples;

    bool unknown() const noexcept { return tuples.empty(); }
};

/// Scores every candidate against the DocTAET in one batch and keeps those
/// strictly above `threshold`, ordered by confidence then triple.
std::vector<TdmPrediction> predict_tdm(const DocTAET& doctaet, const LabelSpace& candidates,
                                       const Scorer& scorer, double threshold = kDefaultThreshold);

/// For each prediction, scores every (context, DM projection) pair and takes
/// the value of the most confident context; ties go to the earlier context.
std::vector<TdmsTuple> attach_scores(const std::vector<TdmPrediction>& predictions,
                                     const std::vector<ScoreContext>& contexts,
                                     const Scorer& dm_scorer);

PaperPrediction predict_paper(const PaperRepr& paper, const LabelSpace& candidates,
                              const Scorer& tdm_scorer, const Scorer& dm_scorer,
                              double threshold = kDefaultThreshold);

/// Runs predict_paper over `papers` with up to `jobs` worker threads. Output
/// order follows input order.
std::vector<PaperPrediction> predict_corpus(const std::vector<PaperRepr>& papers,
                                            const LabelSpace& candidates, const Scorer& tdm_scorer,
                                            const Scorer& dm_scorer, double threshold,
                                            std::size_t jobs = 1);

struct LeaderboardRow {
    std::string doc_id;
    double confidence = 0;
    std::optional<Decimal> score;
    bool score_percent = false;
};

struct Leaderboard {
    TdmTriple triple;
    std::vector<LeaderboardRow> rows;
};

/// Top-k papers predicted for `triple`, by confidence descending, doc_id
/// ascending on ties.
Leaderboard build_leaderboard(const std::vector<PaperPrediction>& predictions,
                              const TdmTriple& triple, std::size_t k);

/// TSV columns: doc_id, task, dataset, metric, score|-, tdm_confidence,
/// score_confidence|-. Unknown papers: task `Unknown`, every other column `-`.
std::string predictions_to_tsv(const std::vector<PaperPrediction>& predictions);
std::vector<PaperPrediction> predictions_from_tsv(std::string_view tsv);

/// TSV columns: rank, doc_id, task, dataset, metric, score|-, confidence.
std::string leaderboard_to_tsv(const Leaderboard& board);

std::string format_confidence(double p);

}  // namespace tdms
