#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/representation.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

enum class InstanceOrigin { tdm, dm };

struct EntailmentInstance {
    std::string context;
    std::string hypothesis;
    bool label = false;
    std::string doc_id;
    InstanceOrigin origin = InstanceOrigin::tdm;

    bool operator==(const EntailmentInstance&) const = default;
};

/// Everything instance generation and inference need from one paper.
struct PaperRepr {
    std::string doc_id;
    DocTAET doctaet;
    std::vector<ScoreContext> contexts;
};

PaperRepr make_paper_repr(const RawDocument& doc, const ReprConfig& config);

/// One JSON object per line; the line form written by `build-repr`.
std::string to_json_line(const PaperRepr& paper);
PaperRepr paper_repr_from_json(std::string_view json);
std::string papers_to_jsonl(const std::vector<PaperRepr>& papers);
std::vector<PaperRepr> papers_from_jsonl(std::string_view jsonl);

/// Per annotated paper: one instance per label-space triple, positive for the
/// paper's own triples. Unknown papers yield all negatives unless
/// `include_unknown` is false. Papers without an annotation are skipped.
/// Throws LabelError when an annotation uses a triple outside the label space.
std::vector<EntailmentInstance> gen_tdm_instances(const std::vector<PaperRepr>& papers,
                                                  const std::vector<GoldAnnotation>& annotations,
                                                  const LabelSpace& label_space,
                                                  bool include_unknown = true);

/// Annotated score vs. table cell. Trailing zeros are ignored; when exactly
/// one side is a percentage and the other is at most 1.0, the fraction is
/// scaled by 100 before comparing.
bool match_score(const Decimal& annotated, const Decimal& cell_value, bool cell_percent,
                 bool annotated_percent = false);

struct NegativePolicy {
    enum class Kind { all, sampled } kind = Kind::all;
    std::size_t k = 0;

    static NegativePolicy all() { return {}; }
    static NegativePolicy sampled(std::size_t k) { return {Kind::sampled, k}; }
    /// "all" or "sampled:K".
    static NegativePolicy parse(std::string_view s);
};

/// For every score context of a paper with scored annotations: contexts whose
/// value matches an annotated score are positive for that annotation's DM
/// pair and negative for every other pair; the rest are negatives drawn per
/// `policy`. Output order: doc_id, context order, DM pair order.
std::vector<EntailmentInstance> gen_dm_instances(const std::vector<PaperRepr>& papers,
                                                 const std::vector<GoldAnnotation>& annotations,
                                                 const std::set<DmPair>& dm_space,
                                                 NegativePolicy policy = NegativePolicy::all(),
                                                 std::uint64_t seed = 0);

std::set<DmPair> dm_space_of(const LabelSpace& label_space);

/// TSV columns: label, origin, doc_id, hypothesis, context.
std::string instances_to_tsv(const std::vector<EntailmentInstance>& instances);
std::vector<EntailmentInstance> instances_from_tsv(std::string_view tsv);

}  // namespace tdms
