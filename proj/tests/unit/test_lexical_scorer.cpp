#include <gtest/gtest.h>

#include "synthetic.hpp"
#include "tdms/error.hpp"
#include "tdms/scorer.hpp"

using namespace tdms;

namespace {

std::vector<EntailmentInstance> separable_instances() {
    // label = 1 exactly when the hypothesis fields occur in the context
    const std::vector<TdmTriple> triples = {{"alpha task", "beta set", "gamma score"},
                                            {"delta task", "epsilon set", "zeta score"},
                                            {"eta task", "theta set", "iota score"},
                                            {"kappa task", "lambda set", "mu score"}};
    std::vector<EntailmentInstance> out;
    for (std::size_t c = 0; c < triples.size(); ++c) {
        const auto& t = triples[c];
        std::string context = "we study " + t.task + " on the " + t.dataset + " and report " + t.metric;
        for (std::size_t h = 0; h < triples.size(); ++h)
            out.push_back({context, serialize_hypothesis(triples[h]), c == h, "d" + std::to_string(c),
                           InstanceOrigin::tdm});
    }
    return out;
}

struct Trained {
    LexicalModel model;
    LabelSpace space;
};

const Trained& fixture_model() {
    static const Trained t = [] {
        auto corpus = fixtures::lexical_corpus(20, 5);
        std::vector<PaperRepr> papers;
        for (auto& d : corpus.docs) papers.push_back(make_paper_repr(d, ReprConfig{}));
        auto space = label_space_of(corpus.gold);
        return Trained{lexical_train(gen_tdm_instances(papers, corpus.gold, space)), space};
    }();
    return t;
}

}  // namespace

TEST(LexicalTrain, SeparableFixtureIsFitPerfectly) {
    auto instances = separable_instances();
    auto model = lexical_train(instances);
    LexicalScorer scorer(model);
    ScoreRequest req;
    for (auto& in : instances) req.pairs.push_back({in.context, in.hypothesis});
    auto res = scorer.score(req);
    ASSERT_EQ(res.probabilities.size(), instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        EXPECT_EQ(res.probabilities[i] > 0.5, instances[i].label) << instances[i].hypothesis;
    EXPECT_LT(model.final_loss, 0.1);
}

TEST(LexicalTrain, SingleClassThrows) {
    auto instances = separable_instances();
    std::erase_if(instances, [](auto& in) { return in.label; });
    EXPECT_THROW(lexical_train(instances), TrainingError);
    EXPECT_THROW(lexical_train({}), TrainingError);
}

TEST(LexicalTrain, Deterministic) {
    auto a = lexical_train(separable_instances());
    auto b = lexical_train(separable_instances());
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.bias, b.bias);
    EXPECT_EQ(to_json(a), to_json(b));
}

TEST(LexicalScore, AliasMakesRg2MatchRouge2) {
    LexicalScorer scorer(fixture_model().model);
    const std::string ctx = "We report Rg-2 on the Gigaword test set.";
    auto res = scorer.score({{{ctx, "Summarization ; Gigaword ; ROUGE-2"},
                              {ctx, "Dependency parsing ; Penn Treebank ; UAS"}}});
    EXPECT_GT(res.probabilities[0], res.probabilities[1]);
    EXPECT_EQ(scorer.features(ctx, "Summarization ; Gigaword ; ROUGE-2").metric_found, 1.0);
}

TEST(LexicalScore, EmptyIntersectionIsBelowHalf) {
    LexicalScorer scorer(fixture_model().model);
    auto res = scorer.score({{{"completely unrelated words here", "Summarization ; Gigaword ; ROUGE-2"}}});
    EXPECT_LT(res.probabilities[0], 0.5);
}

TEST(LexicalScore, ShapeAndBatchingInvariance) {
    LexicalScorer scorer(fixture_model().model);
    ScoreRequest req;
    auto corpus = fixtures::lexical_corpus(5, 2);
    for (auto& d : corpus.docs)
        for (auto& t : fixture_model().space) req.pairs.push_back({d.title + " " + d.abstract, serialize_hypothesis(t)});
    auto whole = scorer.score(req);
    ASSERT_EQ(whole.probabilities.size(), req.pairs.size());
    for (std::size_t i = 0; i < req.pairs.size(); ++i) {
        auto one = scorer.score({{req.pairs[i]}});
        EXPECT_EQ(one.probabilities[0], whole.probabilities[i]);
        EXPECT_GE(whole.probabilities[i], 0.0);
        EXPECT_LE(whole.probabilities[i], 1.0);
    }
}

TEST(LexicalScore, EmptyRequestOrPairIsRejected) {
    LexicalScorer scorer(fixture_model().model);
    EXPECT_THROW(scorer.score({}), InvalidArgument);
    EXPECT_THROW(scorer.score({{{"", "a ; b ; c"}}}), InvalidArgument);
}

TEST(LexicalFeaturesTest, CosineIsMonotoneInSharedTokens) {
    LexicalScorer scorer(fixture_model().model);
    const std::string hyp = "Named entity recognition ; CoNLL 2003 ; F1";
    std::vector<std::string> add = {"Named", "entity", "recognition", "CoNLL", "2003", "F1"};
    std::string ctx = "we propose a tagger";
    double last = scorer.features(ctx, hyp).cosine;
    for (auto& w : add) {
        ctx += " " + w;
        double now = scorer.features(ctx, hyp).cosine;
        EXPECT_GE(now, last) << ctx;
        last = now;
    }
    EXPECT_NEAR(scorer.features("Named entity recognition CoNLL 2003 F1", hyp).cosine, 1.0, 1e-9);
}

TEST(LexicalFeaturesTest, FieldIndicators) {
    LexicalScorer scorer(fixture_model().model);
    auto f = scorer.features("results on the Penn Treebank with UAS", "Dependency parsing ; Penn Treebank ; UAS");
    EXPECT_EQ(f.task_found, 0.0);
    EXPECT_EQ(f.dataset_found, 1.0);
    EXPECT_EQ(f.metric_found, 1.0);
    auto dm = scorer.features("Penn Treebank UAS", "Penn Treebank ; UAS");
    EXPECT_EQ(dm.task_found, 0.0);
    EXPECT_EQ(dm.jaccard, 1.0);
}

TEST(LexicalModelFile, JsonRoundTrip) {
    const auto& m = fixture_model().model;
    auto back = lexical_model_from_json(to_json(m));
    EXPECT_EQ(back.weights, m.weights);
    EXPECT_EQ(back.bias, m.bias);
    EXPECT_EQ(back.idf, m.idf);
    EXPECT_EQ(to_json(back), to_json(m));
    EXPECT_THROW(lexical_model_from_json(R"({"kind":"mlc"})"), FormatError);
    EXPECT_ANY_THROW(lexical_model_from_json("{not json"));
}
