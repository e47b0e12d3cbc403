#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/table.hpp"

namespace tdms {

struct DmPair {
    std::string dataset;
    std::string metric;

    auto operator<=>(const DmPair&) const = default;
};

struct TdmTriple {
    std::string task;
    std::string dataset;
    std::string metric;

    DmPair dm() const { return {dataset, metric}; }
    auto operator<=>(const TdmTriple&) const = default;
};

/// Throws LabelError for empty fields or fields containing ';' (the
/// hypothesis separator).
void validate(const TdmTriple& t);
void validate(const DmPair& p);

/// Parses "task;dataset;metric" (whitespace around ';' is ignored).
TdmTriple parse_triple(std::string_view s);

struct ScoredTriple {
    TdmTriple triple;
    std::optional<NumericValue> score;

    bool operator==(const ScoredTriple&) const = default;
};

struct GoldAnnotation {
    std::string doc_id;
    std::vector<ScoredTriple> triples;
    bool unknown_flag = false;

    bool operator==(const GoldAnnotation&) const = default;
};

using LabelSpace = std::set<TdmTriple>;

enum class LabelField { task, dataset, metric };
std::string_view field_name(LabelField f);
LabelField parse_field(std::string_view s);

/// Surface label -> canonical label, per field. Lookups are trimmed,
/// whitespace-squashed and case-folded. Canonical labels map to themselves.
class AliasTable {
public:
    /// Throws LabelError if the entry would break the fixpoint property.
    void add(LabelField field, std::string_view surface, std::string_view canonical);

    std::string normalize(std::string_view surface, LabelField field) const;

    /// Rewrites every alias occurrence in a word-token stream to the
    /// canonical label's tokens, any field, longest match first.
    std::vector<std::string> canonicalize_tokens(const std::vector<std::string>& tokens) const;

    std::size_t size() const noexcept;

    /// Entries in insertion order, in the load_tsv format.
    std::string to_tsv() const;

    /// TSV rows (field, surface, canonical); blank lines and '#' comments skipped.
    static AliasTable load_tsv(std::string_view tsv);
    static AliasTable from_file(const std::string& path);
    /// The seed entries shipped in data/aliases.tsv.
    static AliasTable builtin();

private:
    std::map<std::string, std::string> by_field_[3];
    // folded canonical forms, used for fixpoint checks and case repair
    std::map<std::string, std::string> canonical_[3];
    // token-level rewrite rules for context canonicalization
    std::map<std::vector<std::string>, std::vector<std::string>> token_rules_;
    std::size_t longest_rule_ = 0;
    std::vector<std::string> entries_;
};

std::string normalize_label(std::string_view surface, LabelField field, const AliasTable& aliases);

TdmTriple normalize_triple(const TdmTriple& t, const AliasTable& aliases);

struct FilteredAnnotations {
    std::vector<GoldAnnotation> annotations;
    LabelSpace label_space;
};

/// Drops triples supported by fewer than `min_papers` distinct papers. Papers
/// left with nothing are flagged unknown.
FilteredAnnotations filter_low_support(const std::vector<GoldAnnotation>& annotations,
                                       std::size_t min_papers);

LabelSpace label_space_of(const std::vector<GoldAnnotation>& annotations);
LabelSpace label_space_of(const std::vector<GoldAnnotation>& annotations,
                          const std::set<std::string>& doc_ids);

enum class SplitMode { standard, zero_shot };
SplitMode parse_split_mode(std::string_view s);

struct CorpusSplit {
    std::set<std::string> train;
    std::set<std::string> test;
    LabelSpace label_space;
};

/// standard: every label-space triple appears on both sides.
/// zero_shot: no test paper carries a triple seen in training; the label
/// space is every triple in the annotations (the test-time hypothesis space).
/// Throws InfeasibleSplit listing the blocking triples.
CorpusSplit make_split(const std::vector<GoldAnnotation>& annotations, SplitMode mode,
                       std::uint64_t seed, double test_fraction = 0.5);

/// Builds a split from explicit doc_id lists, e.g. the released NLP-TDMS
/// train/test files. Label space = triples of the training papers.
CorpusSplit split_from_lists(const std::vector<GoldAnnotation>& annotations,
                             const std::set<std::string>& train,
                             const std::set<std::string>& test);

// ---------------------------------------------------------------------------
// Annotation files

/// Canonical TSV: doc_id, task, dataset, metric, score. `Unknown` in the task
/// column marks an unknown paper; `-` is an absent score.
std::vector<GoldAnnotation> parse_annotations_tsv(std::string_view tsv);
std::string annotations_to_tsv(const std::vector<GoldAnnotation>& annotations);

/// Released-artifact format: `<paper>\t<task>#<dataset>#<metric>#<score>$...`,
/// with `unknow`/`unknown` as the second column for Unknown papers. The paper
/// file extension is stripped to form the doc_id.
std::vector<GoldAnnotation> parse_published_annotations(std::string_view text);

std::vector<GoldAnnotation> normalize_annotations(const std::vector<GoldAnnotation>& annotations,
                                                  const AliasTable& aliases);

std::map<std::string, const GoldAnnotation*> index_by_doc(const std::vector<GoldAnnotation>& annotations);

}  // namespace tdms
