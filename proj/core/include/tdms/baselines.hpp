#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/document.hpp"
#include "tdms/inference.hpp"
#include "tdms/instances.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

enum class Polarity { higher_better, lower_better };

/// Metric name -> polarity. Lookups are case-folded; unlisted metrics are
/// higher_better.
class MetricPolarity {
public:
    void set(std::string_view metric, Polarity p);
    Polarity of(std::string_view metric) const;

    /// TSV rows (metric, higher_better|lower_better).
    static MetricPolarity load_tsv(std::string_view tsv);
    /// perplexity, error rate and WER are lower_better.
    static MetricPolarity defaults();

private:
    std::map<std::string, Polarity> table_;
};

/// Section used as "introduction": the first heading containing
/// "introduction", else the first section. Null for section-less documents.
const Section* introduction_of(const RawDocument& doc);

/// StringMatch baseline. A triple is predicted when its task occurs in the
/// title, abstract or introduction and some bolded score context has the
/// dataset in its caption with the metric in a column header, or the metric
/// in its caption with the dataset in a column header. Among qualifying
/// scores the best one per metric polarity is kept. Empty result = Unknown.
std::vector<TdmsTuple> string_match_predict(const RawDocument& doc, const LabelSpace& taxonomy,
                                            const MetricPolarity& polarity,
                                            const AliasTable& aliases = AliasTable::builtin());

/// Sparse tf-idf bag of words with l2-normalized rows.
struct TfidfVocabulary {
    std::map<std::string, std::size_t> index;
    std::vector<double> idf;

    static TfidfVocabulary fit(const std::vector<std::string>& documents);
    std::vector<std::pair<std::size_t, double>> transform(std::string_view text) const;
};

struct MlcHyperparams {
    double learning_rate = 1.0;
    std::size_t max_iterations = 600;
    double l2 = 1e-4;
    double threshold = 0.5;
};

struct MlcModel {
    TfidfVocabulary vocabulary;
    std::vector<TdmTriple> classes;
    /// classes x (features + 1); the last column is the bias.
    std::vector<std::vector<double>> weights;
    double threshold = 0.5;

    /// Binary score picker over score-context bags of words. Absent when the
    /// training corpus had no positive or no negative score instance.
    std::optional<TfidfVocabulary> picker_vocabulary;
    std::vector<double> picker_weights;
    std::size_t picker_instances = 0;
    std::size_t picker_positives = 0;
};

/// One-vs-rest logistic classifiers over label-space triples (Unknown papers
/// are skipped) plus the score picker, trained on (paper, score context)
/// pairs labelled by whether the value matches an annotated score.
/// Throws TrainingError unless at least two classes have a paper.
MlcModel mlc_train(const std::vector<PaperRepr>& papers, const std::vector<GoldAnnotation>& annotations,
                   const LabelSpace& label_space, const MlcHyperparams& hyper = {});

std::vector<double> mlc_class_probabilities(const MlcModel& model, std::string_view doctaet);

/// Classes above threshold, or the argmax class when none is. Every triple
/// receives the single score the picker ranks highest for the paper. Without
/// a picker, the first context is used if training saw only positives and no
/// score is attached if it saw none.
std::vector<TdmsTuple> mlc_predict(const PaperRepr& paper, const MlcModel& model);

std::string to_json(const MlcModel& model);
MlcModel mlc_model_from_json(std::string_view json);

}  // namespace tdms
