#include "tdms/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "tdms/error.hpp"
#include "tdms/table.hpp"
#include "tdms/text.hpp"

namespace tdms {

std::vector<TdmPrediction> predict_tdm(const DocTAET& doctaet, const LabelSpace& candidates, const Scorer& scorer,
                                       double threshold) {
    if (candidates.empty()) throw InvalidArgument("predict_tdm needs at least one candidate triple");
    if (text::trim(doctaet.rendered).empty()) return {};
    ScoreRequest request;
    request.pairs.reserve(candidates.size());
    for (const auto& t : candidates) request.pairs.push_back({doctaet.rendered, serialize_hypothesis(t)});
    const auto response = scorer.score(request);
    if (response.probabilities.size() != candidates.size())
        throw ProtocolError("scorer returned " + std::to_string(response.probabilities.size()) + " probabilities for " +
                            std::to_string(candidates.size()) + " candidates");

    std::vector<TdmPrediction> out;
    std::size_t i = 0;
    for (const auto& t : candidates) {
        const double p = response.probabilities[i++];
        if (p > threshold) out.push_back({doctaet.doc_id, t, p});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.confidence > b.confidence; });
    return out;
}

std::vector<TdmsTuple> attach_scores(const std::vector<TdmPrediction>& predictions,
                                     const std::vector<ScoreContext>& contexts, const Scorer& dm_scorer) {
    std::vector<TdmsTuple> out;
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < contexts.size(); ++i)
        if (!text::trim(contexts[i].rendered).empty()) usable.push_back(i);

    for (const auto& pred : predictions) {
        TdmsTuple tuple{pred.doc_id, pred.triple, pred.confidence, std::nullopt, false, std::nullopt, std::nullopt};
        if (!usable.empty()) {
            ScoreRequest request;
            const std::string hypothesis = serialize_hypothesis(pred.triple.dm());
            for (auto i : usable) request.pairs.push_back({contexts[i].rendered, hypothesis});
            const auto response = dm_scorer.score(request);
            if (response.probabilities.size() != usable.size())
                throw ProtocolError("scorer returned the wrong number of probabilities");
            std::size_t best = 0;
            for (std::size_t k = 1; k < usable.size(); ++k)
                if (response.probabilities[k] > response.probabilities[best]) best = k;  // ties keep the earlier
            const ScoreContext& sc = contexts[usable[best]];
            tuple.score = sc.value;
            tuple.score_percent = sc.percent_flag;
            tuple.score_confidence = response.probabilities[best];
            tuple.provenance = Provenance{sc.table_id, sc.row, sc.col};
        }
        out.push_back(std::move(tuple));
    }
    return out;
}

PaperPrediction predict_paper(const PaperRepr& paper, const LabelSpace& candidates, const Scorer& tdm_scorer,
                              const Scorer& dm_scorer, double threshold) {
    auto preds = predict_tdm(paper.doctaet, candidates, tdm_scorer, threshold);
    return {paper.doc_id, attach_scores(preds, paper.contexts, dm_scorer)};
}

std::vector<PaperPrediction> predict_corpus(const std::vector<PaperRepr>& papers, const LabelSpace& candidates,
                                            const Scorer& tdm_scorer, const Scorer& dm_scorer, double threshold,
                                            std::size_t jobs) {
    std::vector<PaperPrediction> out(papers.size());
    jobs = std::max<std::size_t>(1, std::min(jobs, papers.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < papers.size(); ++i)
            out[i] = predict_paper(papers[i], candidates, tdm_scorer, dm_scorer, threshold);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < papers.size();) {
                try {
                    out[i] = predict_paper(papers[i], candidates, tdm_scorer, dm_scorer, threshold);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = papers.size();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

Leaderboard build_leaderboard(const std::vector<PaperPrediction>& predictions, const TdmTriple& triple, std::size_t k) {
    Leaderboard board{triple, {}};
    for (const auto& paper : predictions)
        for (const auto& t : paper.tuples)
            if (t.triple == triple) board.rows.push_back({t.doc_id, t.confidence, t.score, t.score_percent});
    std::sort(board.rows.begin(), board.rows.end(), [](const auto& a, const auto& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.doc_id < b.doc_id;
    });
    if (board.rows.size() > k) board.rows.resize(k);
    return board;
}

std::string format_confidence(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

namespace {

std::string score_text(const std::optional<Decimal>& s, bool percent) {
    return s ? s->to_string() + (percent ? "%" : "") : "-";
}

}  // namespace

std::string predictions_to_tsv(const std::vector<PaperPrediction>& predictions) {
    std::string out;
    for (const auto& paper : predictions) {
        if (paper.unknown()) {
            out += paper.doc_id + "\tUnknown\t-\t-\t-\t-\t-\n";
            continue;
        }
        for (const auto& t : paper.tuples) {
            out += t.doc_id + '\t' + t.triple.task + '\t' + t.triple.dataset + '\t' + t.triple.metric + '\t' +
                   score_text(t.score, t.score_percent) + '\t' + format_confidence(t.confidence) + '\t' +
                   (t.score_confidence ? format_confidence(*t.score_confidence) : "-") + '\n';
        }
    }
    return out;
}

std::vector<PaperPrediction> predictions_from_tsv(std::string_view tsv) {
    std::vector<PaperPrediction> out;
    std::map<std::string, std::size_t> index;
    std::size_t n = 0;
    for (auto line : text::split(tsv, '\n')) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 7) throw FormatError("predictions line " + std::to_string(n) + ": expected 7 columns");
        auto [it, inserted] = index.emplace(cols[0], out.size());
        if (inserted) out.push_back({cols[0], {}});
        if (cols[1] == "Unknown") continue;
        TdmsTuple t;
        t.doc_id = cols[0];
        t.triple = {cols[1], cols[2], cols[3]};
        validate(t.triple);
        if (cols[4] != "-") {
            auto v = detect_numeric(cols[4]);
            if (!v) throw FormatError("predictions line " + std::to_string(n) + ": bad score '" + cols[4] + "'");
            t.score = v->value;
            t.score_percent = v->percent_flag;
        }
        try {
            t.confidence = std::stod(cols[5]);
            if (cols[6] != "-") t.score_confidence = std::stod(cols[6]);
        } catch (const std::exception&) {
            throw FormatError("predictions line " + std::to_string(n) + ": bad confidence");
        }
        out[it->second].tuples.push_back(std::move(t));
    }
    return out;
}

std::string leaderboard_to_tsv(const Leaderboard& board) {
    std::string out = "rank\tdoc_id\ttask\tdataset\tmetric\tscore\tconfidence\n";
    std::size_t rank = 1;
    for (const auto& r : board.rows) {
        out += std::to_string(rank++) + '\t' + r.doc_id + '\t' + board.triple.task + '\t' + board.triple.dataset + '\t' +
               board.triple.metric + '\t' + score_text(r.score, r.score_percent) + '\t' + format_confidence(r.confidence) +
               '\n';
    }
    return out;
}

}  // namespace tdms
