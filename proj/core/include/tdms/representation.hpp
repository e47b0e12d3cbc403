#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/decimal.hpp"
#include "tdms/document.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

enum class ScSource { bold_only, all_numeric };

struct ReprConfig {
    bool include_exp_setup = true;
    bool include_table_info = true;
    std::size_t max_tokens = 512;
    std::size_t part_truncate = 150;
    std::size_t sc_max_tokens = 128;
    ScSource sc_source = ScSource::bold_only;

    bool operator==(const ReprConfig&) const = default;
};

/// Throws InvalidArgument when part_truncate > max_tokens or a budget is zero.
void validate(const ReprConfig& config);

/// Ablation row name: "Title+Abstract", "Title+Abstract + ExpSetup", ...
std::string config_label(const ReprConfig& config);

/// JSON object with exactly the ReprConfig field names. Missing fields keep
/// their defaults; unknown fields are rejected.
ReprConfig repr_config_from_json(std::string_view json);
std::string to_json(const ReprConfig& config);

/// Separator placed between DocTAET parts; counts as one token.
inline constexpr std::string_view kPartMarker = "[SEP]";

struct DocTAET {
    std::string doc_id;
    std::string title;
    std::string abstract;
    std::string exp_setup;
    std::string table_info;
    ReprConfig config;
    std::string rendered;
};

struct ScoreContext {
    std::string doc_id;
    std::string table_id;
    std::size_t row = 0;
    std::size_t col = 0;
    Decimal value;
    bool percent_flag = false;
    bool is_bold = false;
    std::vector<std::string> headers;
    std::string caption;
    std::string rendered;
};

/// Sentence filter for ExpSetup. A sentence qualifies when it contains a cue
/// word or phrase (whole-word match) and its section heading contains one of
/// the heading stems (substring match). Both comparisons are case-insensitive.
struct ExpSetupRules {
    std::vector<std::string> cues = {"experiment on", "experiment in", "evaluation", "evaluations",
                                     "evaluate",      "evaluated",     "dataset",    "datasets",
                                     "corpus",        "corpora"};
    std::vector<std::string> heading_stems = {"experiment", "evaluation", "dataset"};
};

std::vector<std::string> extract_exp_setup(const RawDocument& doc, const ExpSetupRules& rules = {});

/// Captions and distinct column headers of every table, in document order.
std::string table_info_text(const RawDocument& doc);

DocTAET build_doctaet(const RawDocument& doc, const ReprConfig& config,
                      const ExpSetupRules& rules = {});

std::vector<ScoreContext> build_score_contexts(const RawDocument& doc, const ReprConfig& config);

/// "task ; dataset ; metric" and "dataset ; metric".
std::string serialize_hypothesis(const TdmTriple& t);
std::string serialize_hypothesis(const DmPair& p);

}  // namespace tdms
