#include "httplib.h"
#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/scorer.hpp"

namespace tdms {

namespace {

using json = nlohmann::json;

}  // namespace

std::string request_to_json(const ScoreRequest& request) {
    json j;
    j["pairs"] = json::array();
    for (const auto& p : request.pairs) j["pairs"].push_back({{"context", p.context}, {"hypothesis", p.hypothesis}});
    return j.dump();
}

ScoreRequest request_from_json(std::string_view input) {
    try {
        json j = json::parse(input);
        ScoreRequest r;
        for (const auto& p : j.at("pairs"))
            r.pairs.push_back({p.at("context").get<std::string>(), p.at("hypothesis").get<std::string>()});
        validate(r);
        return r;
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("score request: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ProtocolError(std::string("score request: ") + e.what());
    }
}

std::string response_to_json(const ScoreResponse& response) {
    json j;
    j["probabilities"] = response.probabilities;
    return j.dump();
}

ScoreResponse response_from_json(std::string_view input, std::size_t expected) {
    ScoreResponse r;
    try {
        json j = json::parse(input);
        for (const auto& v : j.at("probabilities")) {
            if (!v.is_number()) throw ProtocolError("score response: probability is not a number");
            r.probabilities.push_back(v.get<double>());
        }
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("score response: ") + e.what());
    }
    if (r.probabilities.size() != expected)
        throw ProtocolError("score response: expected " + std::to_string(expected) + " probabilities, got " +
                            std::to_string(r.probabilities.size()));
    for (double p : r.probabilities)
        if (!(p >= 0.0 && p <= 1.0)) throw ProtocolError("score response: probability outside [0,1]");
    return r;
}

RemoteScorer::RemoteScorer(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw InvalidArgument("remote scorer needs an endpoint");
    if (options_.max_batch == 0) throw InvalidArgument("max_batch must be positive");
}

ScoreResponse RemoteScorer::score_batch(const std::vector<TextPair>& pairs) const {
    // one client per call: httplib clients are not safe to share across threads
    httplib::Client client(options_.endpoint);
    if (!client.is_valid()) throw TransportError("invalid endpoint '" + options_.endpoint + "'");
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    httplib::Headers headers;
    if (!options_.model.empty()) headers.emplace("X-Model", options_.model);

    auto result = client.Post("/score", headers, request_to_json(ScoreRequest{pairs}), "application/json");
    if (!result)
        throw TransportError("POST " + options_.endpoint + "/score failed: " + httplib::to_string(result.error()));
    const auto& res = result.value();
    if (res.status == 200) return response_from_json(res.body, pairs.size());
    if (res.status == 400) throw ScoringError("endpoint rejected the request as malformed (400): " + res.body);
    if (res.status == 503) throw ScoringError("endpoint has no model loaded (503)");
    throw ScoringError("endpoint answered HTTP " + std::to_string(res.status));
}

ScoreResponse RemoteScorer::score(const ScoreRequest& request) const {
    validate(request);
    ScoreResponse out;
    out.probabilities.reserve(request.pairs.size());
    for (std::size_t start = 0; start < request.pairs.size(); start += options_.max_batch) {
        const std::size_t end = std::min(request.pairs.size(), start + options_.max_batch);
        std::vector<TextPair> batch(request.pairs.begin() + static_cast<std::ptrdiff_t>(start),
                                    request.pairs.begin() + static_cast<std::ptrdiff_t>(end));
        auto part = score_batch(batch);
        out.probabilities.insert(out.probabilities.end(), part.probabilities.begin(), part.probabilities.end());
    }
    return out;
}

}  // namespace tdms
