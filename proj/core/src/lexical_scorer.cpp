#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/representation.hpp"
#include "tdms/scorer.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using json = nlohmann::ordered_json;

struct TokenView {
    std::vector<std::string> sequence;
    std::set<std::string> set;
};

TokenView tokenize(std::string_view s, const AliasTable& aliases) {
    std::string cleaned(s);
    for (std::size_t pos; (pos = cleaned.find(kPartMarker)) != std::string::npos;)
        cleaned.replace(pos, kPartMarker.size(), " ");
    TokenView v;
    v.sequence = aliases.canonicalize_tokens(text::word_tokens(cleaned));
    v.set.insert(v.sequence.begin(), v.sequence.end());
    return v;
}

struct HypothesisView {
    std::vector<std::vector<std::string>> fields;  // task?, dataset, metric
    std::set<std::string> set;
};

HypothesisView tokenize_hypothesis(std::string_view h, const AliasTable& aliases) {
    HypothesisView v;
    std::string s(h);
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(" ; ", start);
        std::string field = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        v.fields.push_back(aliases.canonicalize_tokens(text::word_tokens(field)));
        if (pos == std::string::npos) break;
        start = pos + 3;
    }
    for (const auto& f : v.fields) v.set.insert(f.begin(), f.end());
    return v;
}

double sq_norm(const std::set<std::string>& tokens, const LexicalModel& m) {
    double n = 0;
    for (const auto& t : tokens) {
        auto it = m.idf.find(t);
        double w = it == m.idf.end() ? m.unseen_idf : it->second;
        n += w * w;
    }
    return n;
}

LexicalFeatures featurize(const TokenView& ctx, double ctx_norm, const HypothesisView& hyp, const LexicalModel& m) {
    LexicalFeatures f;
    double dot = 0;
    std::size_t shared = 0;
    for (const auto& t : hyp.set) {
        if (!ctx.set.count(t)) continue;
        ++shared;
        auto it = m.idf.find(t);
        double w = it == m.idf.end() ? m.unseen_idf : it->second;
        dot += w * w;
    }
    const double hyp_norm = std::sqrt(sq_norm(hyp.set, m));
    if (ctx_norm > 0 && hyp_norm > 0) f.cosine = dot / (ctx_norm * hyp_norm);
    const std::size_t uni = ctx.set.size() + hyp.set.size() - shared;
    if (uni > 0) f.jaccard = static_cast<double>(shared) / static_cast<double>(uni);

    auto found = [&](const std::vector<std::string>& field) {
        return text::contains_sequence(ctx.sequence, field) ? 1.0 : 0.0;
    };
    const auto n = hyp.fields.size();
    if (n >= 1) f.metric_found = found(hyp.fields[n - 1]);
    if (n >= 2) f.dataset_found = found(hyp.fields[n - 2]);
    if (n >= 3) f.task_found = found(hyp.fields[n - 3]);
    return f;
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logit(const LexicalModel& m, const LexicalFeatures& f) {
    auto x = f.as_array();
    double z = m.bias;
    for (std::size_t i = 0; i < kLexicalFeatures; ++i) z += m.weights[i] * x[i];
    return z;
}

// Featurizes many pairs, tokenizing each distinct context once.
std::vector<LexicalFeatures> featurize_all(const std::vector<std::pair<std::string_view, std::string_view>>& pairs,
                                           const LexicalModel& m, const AliasTable& aliases) {
    std::unordered_map<std::string_view, std::pair<TokenView, double>> contexts;
    std::unordered_map<std::string_view, HypothesisView> hypotheses;
    std::vector<LexicalFeatures> out;
    out.reserve(pairs.size());
    for (const auto& [c, h] : pairs) {
        auto cit = contexts.find(c);
        if (cit == contexts.end()) {
            TokenView tv = tokenize(c, aliases);
            double norm = std::sqrt(sq_norm(tv.set, m));
            cit = contexts.emplace(c, std::make_pair(std::move(tv), norm)).first;
        }
        auto hit = hypotheses.find(h);
        if (hit == hypotheses.end()) hit = hypotheses.emplace(h, tokenize_hypothesis(h, aliases)).first;
        out.push_back(featurize(cit->second.first, cit->second.second, hit->second, m));
    }
    return out;
}

}  // namespace

void validate(const ScoreRequest& request) {
    if (request.pairs.empty()) throw InvalidArgument("score request has no pairs");
    for (std::size_t i = 0; i < request.pairs.size(); ++i) {
        if (request.pairs[i].context.empty() || request.pairs[i].hypothesis.empty())
            throw InvalidArgument("score request pair " + std::to_string(i) + " has an empty context or hypothesis");
    }
}

LexicalModel lexical_train(const std::vector<EntailmentInstance>& instances, const LexicalHyperparams& hyper,
                           const AliasTable& aliases) {
    const auto positives = static_cast<std::size_t>(
        std::count_if(instances.begin(), instances.end(), [](const auto& in) { return in.label; }));
    if (positives == 0 || positives == instances.size())
        throw TrainingError("lexical training needs both positive and negative instances (got " +
                            std::to_string(positives) + " positive of " + std::to_string(instances.size()) + ")");

    LexicalModel model;
    model.aliases_tsv = aliases.to_tsv();

    // idf over the distinct training contexts
    std::map<std::string, std::size_t> df;
    std::set<std::string_view> seen;
    std::size_t docs = 0;
    for (const auto& in : instances) {
        if (!seen.insert(in.context).second) continue;
        ++docs;
        for (const auto& t : tokenize(in.context, aliases).set) ++df[t];
    }
    const double n = static_cast<double>(docs);
    for (const auto& [t, count] : df) model.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0;
    model.unseen_idf = std::log(1.0 + n) + 1.0;

    std::vector<std::pair<std::string_view, std::string_view>> pairs;
    pairs.reserve(instances.size());
    for (const auto& in : instances) pairs.emplace_back(in.context, in.hypothesis);
    const auto feats = featurize_all(pairs, model, aliases);

    const double total = static_cast<double>(instances.size());
    const double w_pos = hyper.balance_classes ? total / (2.0 * static_cast<double>(positives)) : 1.0;
    const double w_neg = hyper.balance_classes ? total / (2.0 * (total - static_cast<double>(positives))) : 1.0;

    std::array<double, kLexicalFeatures> grad{};
    for (std::size_t iter = 0; iter < hyper.max_iterations; ++iter) {
        grad.fill(0);
        double grad_bias = 0, loss = 0;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const double y = instances[i].label ? 1.0 : 0.0;
            const double w = instances[i].label ? w_pos : w_neg;
            const double p = sigmoid(logit(model, feats[i]));
            const double err = w * (p - y);
            auto x = feats[i].as_array();
            for (std::size_t k = 0; k < kLexicalFeatures; ++k) grad[k] += err * x[k];
            grad_bias += err;
            const double py = instances[i].label ? p : 1.0 - p;
            loss -= w * std::log(std::max(py, 1e-300));
        }
        loss /= total;
        double reg = 0;
        for (double wk : model.weights) reg += wk * wk;
        model.final_loss = loss + 0.5 * hyper.l2 * reg;
        if (model.final_loss < hyper.loss_threshold) break;
        for (std::size_t k = 0; k < kLexicalFeatures; ++k)
            model.weights[k] -= hyper.learning_rate * (grad[k] / total + hyper.l2 * model.weights[k]);
        model.bias -= hyper.learning_rate * grad_bias / total;
    }
    return model;
}

std::string to_json(const LexicalModel& model) {
    json j;
    j["kind"] = "lexical";
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["unseen_idf"] = model.unseen_idf;
    j["final_loss"] = model.final_loss;
    j["aliases_tsv"] = model.aliases_tsv;
    j["idf"] = json::object();
    for (const auto& [t, w] : model.idf) j["idf"][t] = w;
    return j.dump() + "\n";
}

LexicalModel lexical_model_from_json(std::string_view input) {
    try {
        json j = json::parse(input);
        if (j.value("kind", "") != "lexical") throw FormatError("not a lexical model file");
        LexicalModel m;
        m.weights = j.at("weights").get<std::array<double, kLexicalFeatures>>();
        m.bias = j.at("bias").get<double>();
        m.unseen_idf = j.at("unseen_idf").get<double>();
        m.final_loss = j.value("final_loss", 0.0);
        m.aliases_tsv = j.value("aliases_tsv", "");
        for (const auto& [t, w] : j.at("idf").items()) {
            double v = w.get<double>();
            if (!(v >= 0) || !std::isfinite(v)) throw FormatError("idf for '" + t + "' is not a finite non-negative value");
            m.idf[t] = v;
        }
        for (double w : m.weights)
            if (!std::isfinite(w)) throw FormatError("non-finite weight in lexical model");
        return m;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("lexical model: ") + e.what(), e.byte);
    } catch (const json::exception& e) {
        throw FormatError(std::string("lexical model: ") + e.what());
    }
}

LexicalScorer::LexicalScorer(LexicalModel model)
    : model_(std::move(model)), aliases_(AliasTable::load_tsv(model_.aliases_tsv)) {}

LexicalFeatures LexicalScorer::features(std::string_view context, std::string_view hypothesis) const {
    return featurize_all({{context, hypothesis}}, model_, aliases_).front();
}

double LexicalScorer::probability(const LexicalFeatures& f) const { return sigmoid(logit(model_, f)); }

ScoreResponse LexicalScorer::score(const ScoreRequest& request) const {
    validate(request);
    std::vector<std::pair<std::string_view, std::string_view>> pairs;
    pairs.reserve(request.pairs.size());
    for (const auto& p : request.pairs) pairs.emplace_back(p.context, p.hypothesis);
    ScoreResponse response;
    for (const auto& f : featurize_all(pairs, model_, aliases_)) response.probabilities.push_back(probability(f));
    return response;
}

}  // namespace tdms
