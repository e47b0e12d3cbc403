#include <gtest/gtest.h>

#include <atomic>
#include <map>

#include "synthetic.hpp"
#include "tdms/error.hpp"
#include "tdms/inference.hpp"

using namespace tdms;

namespace {

// Looks up a probability by hypothesis (and optionally context); counts pairs.
class StubScorer final : public Scorer {
public:
    std::map<std::string, double> by_hypothesis;
    std::map<std::pair<std::string, std::string>, double> by_pair;
    double fallback = 0.0;
    mutable std::atomic<std::size_t> pairs_seen{0};
    mutable std::atomic<std::size_t> calls{0};

    ScoreResponse score(const ScoreRequest& request) const override {
        validate(request);
        ++calls;
        ScoreResponse r;
        for (const auto& p : request.pairs) {
            ++pairs_seen;
            if (auto it = by_pair.find({p.context, p.hypothesis}); it != by_pair.end())
                r.probabilities.push_back(it->second);
            else if (auto h = by_hypothesis.find(p.hypothesis); h != by_hypothesis.end())
                r.probabilities.push_back(h->second);
            else
                r.probabilities.push_back(fallback);
        }
        return r;
    }
};

TdmTriple t(int i) { return {"task" + std::to_string(i), "data" + std::to_string(i), "metric" + std::to_string(i)}; }

DocTAET doctaet(const std::string& id = "d") {
    DocTAET d;
    d.doc_id = id;
    d.title = "title";
    d.rendered = "title [SEP] abstract";
    return d;
}

ScoreContext sc(const std::string& table, std::size_t row, std::size_t col, const char* value, std::string rendered) {
    ScoreContext s;
    s.doc_id = "d";
    s.table_id = table;
    s.row = row;
    s.col = col;
    s.value = *Decimal::parse(value);
    s.rendered = std::move(rendered);
    return s;
}

}  // namespace

TEST(PredictTdm, ThresholdAndOrder) {
    StubScorer s;
    s.by_hypothesis = {{serialize_hypothesis(t(1)), 0.9}, {serialize_hypothesis(t(2)), 0.4},
                       {serialize_hypothesis(t(3)), 0.1}};
    auto got = predict_tdm(doctaet(), {t(1), t(2), t(3)}, s, 0.5);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0].triple, t(1));
    EXPECT_DOUBLE_EQ(got[0].confidence, 0.9);

    s.by_hypothesis[serialize_hypothesis(t(2))] = 0.95;
    got = predict_tdm(doctaet(), {t(1), t(2), t(3)}, s, 0.5);
    ASSERT_EQ(got.size(), 2u);
    EXPECT_EQ(got[0].triple, t(2));
    EXPECT_EQ(got[1].triple, t(1));
}

TEST(PredictTdm, ThresholdIsStrict) {
    StubScorer s;
    s.fallback = 0.5;
    EXPECT_TRUE(predict_tdm(doctaet(), {t(1), t(2)}, s, 0.5).empty());
}

TEST(PredictTdm, OneBatchOfExactlyCandidatePairs) {
    StubScorer s;
    LabelSpace space;
    for (int i = 0; i < 77; ++i) space.insert(t(i));
    predict_tdm(doctaet(), space, s);
    EXPECT_EQ(s.pairs_seen.load(), 77u);
    EXPECT_EQ(s.calls.load(), 1u);
    EXPECT_THROW(predict_tdm(doctaet(), {}, s), InvalidArgument);
}

TEST(AttachScores, MostConfidentContextWins) {
    StubScorer s;
    auto dm = serialize_hypothesis(t(1).dm());
    s.by_pair = {{{"ctx one", dm}, 0.2}, {{"ctx two", dm}, 0.8}};
    std::vector<ScoreContext> scs{sc("tab_0", 2, 1, "10.5", "ctx one"), sc("tab_1", 3, 2, "77.25", "ctx two")};
    auto out = attach_scores({{"d", t(1), 0.9}}, scs, s);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(*out[0].score, *Decimal::parse("77.25"));
    EXPECT_EQ(out[0].provenance, (Provenance{"tab_1", 3, 2}));
    EXPECT_DOUBLE_EQ(*out[0].score_confidence, 0.8);
    EXPECT_DOUBLE_EQ(out[0].confidence, 0.9);
}

TEST(AttachScores, NoContextsLeavesScoreAbsent) {
    StubScorer s;
    auto out = attach_scores({{"d", t(1), 0.9}}, {}, s);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_FALSE(out[0].score.has_value());
    EXPECT_FALSE(out[0].provenance.has_value());
    EXPECT_EQ(s.calls.load(), 0u);
}

TEST(AttachScores, TieGoesToEarlierContext) {
    StubScorer s;
    s.fallback = 0.6;
    std::vector<ScoreContext> scs{sc("tab_0", 1, 1, "1.0", "first"), sc("tab_0", 2, 1, "2.0", "second")};
    auto out = attach_scores({{"d", t(1), 0.9}}, scs, s);
    EXPECT_EQ(*out[0].score, *Decimal::parse("1.0"));
    // and the same when the order is swapped
    std::swap(scs[0], scs[1]);
    out = attach_scores({{"d", t(1), 0.9}}, scs, s);
    EXPECT_EQ(*out[0].score, *Decimal::parse("2.0"));
}

TEST(PredictCorpus, ParallelMatchesSerialAndKeepsOrder) {
    auto corpus = fixtures::lexical_corpus(12, 4);
    std::vector<PaperRepr> papers;
    for (auto& d : corpus.docs) papers.push_back(make_paper_repr(d, ReprConfig{}));
    auto space = label_space_of(corpus.gold);
    StubScorer tdm;
    for (auto& tr : space) tdm.by_hypothesis[serialize_hypothesis(tr)] = 0.3;
    // each paper's own triple by pairing its DocTAET with the hypothesis
    for (std::size_t i = 0; i < papers.size(); ++i)
        tdm.by_pair[{papers[i].doctaet.rendered, serialize_hypothesis(corpus.gold[i].triples[0].triple)}] = 0.9;
    StubScorer dm;
    dm.fallback = 0.7;
    auto serial = predict_corpus(papers, space, tdm, dm, 0.5, 1);
    auto parallel = predict_corpus(papers, space, tdm, dm, 0.5, 4);
    ASSERT_EQ(serial.size(), papers.size());
    EXPECT_EQ(predictions_to_tsv(serial), predictions_to_tsv(parallel));
    for (std::size_t i = 0; i < papers.size(); ++i) {
        EXPECT_EQ(parallel[i].doc_id, papers[i].doc_id);
        ASSERT_EQ(parallel[i].tuples.size(), 1u);
        EXPECT_EQ(parallel[i].tuples[0].triple, corpus.gold[i].triples[0].triple);
        EXPECT_EQ(*parallel[i].tuples[0].score, corpus.gold[i].triples[0].score->value);
    }
}

TEST(PredictCorpus, ScorerErrorsPropagate) {
    class Failing final : public Scorer {
    public:
        ScoreResponse score(const ScoreRequest&) const override { throw ScoringError("down"); }
    };
    auto corpus = fixtures::lexical_corpus(3, 1);
    std::vector<PaperRepr> papers;
    for (auto& d : corpus.docs) papers.push_back(make_paper_repr(d, ReprConfig{}));
    Failing f;
    EXPECT_THROW(predict_corpus(papers, label_space_of(corpus.gold), f, f, 0.5, 2), ScoringError);
}

TEST(Leaderboard, SortsAndTruncates) {
    std::vector<PaperPrediction> preds = {
        {"p2", {{"p2", t(1), 0.7, *Decimal::parse("30.1"), false, 0.9, std::nullopt}}},
        {"p1", {{"p1", t(1), 0.7, *Decimal::parse("31.0"), false, 0.9, std::nullopt}}},
        {"p3", {{"p3", t(1), 0.95, std::nullopt, false, std::nullopt, std::nullopt}}},
        {"p4", {{"p4", t(2), 0.99, std::nullopt, false, std::nullopt, std::nullopt}}},
        {"p5", {}},
    };
    auto board = build_leaderboard(preds, t(1), 10);
    ASSERT_EQ(board.rows.size(), 3u);
    EXPECT_EQ(board.rows[0].doc_id, "p3");
    EXPECT_EQ(board.rows[1].doc_id, "p1");
    EXPECT_EQ(board.rows[2].doc_id, "p2");
    EXPECT_EQ(build_leaderboard(preds, t(1), 2).rows.size(), 2u);
    auto tsv = leaderboard_to_tsv(board);
    EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "rank\tdoc_id\ttask\tdataset\tmetric\tscore\tconfidence");
    EXPECT_NE(tsv.find("2\tp1\ttask1\tdata1\tmetric1\t31.0\t0.700000"), std::string::npos);
    EXPECT_NE(tsv.find("1\tp3\ttask1\tdata1\tmetric1\t-\t0.950000"), std::string::npos);
}

TEST(PredictionFiles, TsvRoundTrip) {
    std::vector<PaperPrediction> preds = {
        {"a", {{"a", t(1), 0.75, *Decimal::parse("85.60"), true, 0.5, std::nullopt},
               {"a", t(2), 0.6, std::nullopt, false, std::nullopt, std::nullopt}}},
        {"b", {}},
    };
    auto tsv = predictions_to_tsv(preds);
    EXPECT_NE(tsv.find("b\tUnknown\t-\t-\t-\t-\t-"), std::string::npos);
    auto back = predictions_from_tsv(tsv);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_TRUE(back[1].unknown());
    ASSERT_EQ(back[0].tuples.size(), 2u);
    EXPECT_EQ(back[0].tuples[0].triple, t(1));
    EXPECT_EQ(*back[0].tuples[0].score, *Decimal::parse("85.60"));
    EXPECT_TRUE(back[0].tuples[0].score_percent);
    EXPECT_FALSE(back[0].tuples[1].score.has_value());
    EXPECT_EQ(predictions_to_tsv(back), tsv);
    EXPECT_ANY_THROW(predictions_from_tsv("a\tx\ty\n"));
}
