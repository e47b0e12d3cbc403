#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/instances.hpp"
#include "tdms/taxonomy.hpp"

namespace tdms {

struct TextPair {
    std::string context;
    std::string hypothesis;
};

struct ScoreRequest {
    std::vector<TextPair> pairs;
};

struct ScoreResponse {
    std::vector<double> probabilities;
};

/// Throws InvalidArgument on an empty request or an empty context/hypothesis.
void validate(const ScoreRequest& request);

/// Probability that each hypothesis is entailed by its context. Implementations
/// are immutable after construction and may be shared across threads.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual ScoreResponse score(const ScoreRequest& request) const = 0;
};

// ---------------------------------------------------------------------------
// Lexical scorer

inline constexpr std::size_t kLexicalFeatures = 5;

/// cosine: binary tf-idf cosine of context and hypothesis token sets.
/// task/dataset/metric: 1 when that hypothesis field occurs as a contiguous
/// token run in the context (task is 0 for two-field DM hypotheses).
/// jaccard: token-set overlap.
struct LexicalFeatures {
    double cosine = 0;
    double task_found = 0;
    double dataset_found = 0;
    double metric_found = 0;
    double jaccard = 0;

    std::array<double, kLexicalFeatures> as_array() const {
        return {cosine, task_found, dataset_found, metric_found, jaccard};
    }
};

struct LexicalModel {
    std::map<std::string, double> idf;
    double unseen_idf = 1.0;
    std::array<double, kLexicalFeatures> weights{};
    double bias = 0;
    /// Alias rules applied to both sides before featurization (TSV text).
    std::string aliases_tsv;
    double final_loss = 0;
};

struct LexicalHyperparams {
    double learning_rate = 2.0;
    std::size_t max_iterations = 4000;
    double l2 = 1e-6;
    double loss_threshold = 0.02;
    /// Weight positives and negatives so each class carries half the loss.
    bool balance_classes = true;
};

/// Fits the logistic weights with full-batch gradient descent. Throws
/// TrainingError when the instances do not contain both labels.
LexicalModel lexical_train(const std::vector<EntailmentInstance>& instances,
                           const LexicalHyperparams& hyper = {},
                           const AliasTable& aliases = AliasTable::builtin());

std::string to_json(const LexicalModel& model);
LexicalModel lexical_model_from_json(std::string_view json);

class LexicalScorer final : public Scorer {
public:
    explicit LexicalScorer(LexicalModel model);

    ScoreResponse score(const ScoreRequest& request) const override;

    LexicalFeatures features(std::string_view context, std::string_view hypothesis) const;
    double probability(const LexicalFeatures& f) const;
    const LexicalModel& model() const noexcept { return model_; }

private:
    LexicalModel model_;
    AliasTable aliases_;
};

// ---------------------------------------------------------------------------
// Remote scorer

struct RemoteOptions {
    /// Base URL such as "http://127.0.0.1:8500".
    std::string endpoint;
    /// Sent as the X-Model header ("tdm" or "dm"); omitted when empty.
    std::string model;
    std::size_t max_batch = 256;
    std::chrono::milliseconds connect_timeout{2000};
    std::chrono::milliseconds read_timeout{60000};
};

/// Client for the HTTP scoring service: POST /score with
/// {"pairs":[{"context":..,"hypothesis":..}]} -> {"probabilities":[..]}.
/// Unreachable endpoint -> TransportError; malformed reply -> ProtocolError;
/// 400/503 and other statuses -> ScoringError.
class RemoteScorer final : public Scorer {
public:
    explicit RemoteScorer(RemoteOptions options);
    ScoreResponse score(const ScoreRequest& request) const override;

private:
    ScoreResponse score_batch(const std::vector<TextPair>& pairs) const;
    RemoteOptions options_;
};

std::string request_to_json(const ScoreRequest& request);
ScoreRequest request_from_json(std::string_view json);
std::string response_to_json(const ScoreResponse& response);
/// Throws ProtocolError on malformed input or values outside [0,1].
ScoreResponse response_from_json(std::string_view json, std::size_t expected);

}  // namespace tdms
