#include <gtest/gtest.h>

#include <random>

#include "tdms/error.hpp"
#include "tdms/taxonomy.hpp"

using namespace tdms;

namespace {

GoldAnnotation paper(std::string id, std::vector<TdmTriple> triples) {
    GoldAnnotation g{std::move(id), {}, triples.empty()};
    for (auto& t : triples) g.triples.push_back({std::move(t), std::nullopt});
    return g;
}

std::vector<GoldAnnotation> random_corpus(std::mt19937_64& rng, std::size_t papers, std::size_t triples) {
    std::vector<GoldAnnotation> out;
    for (std::size_t i = 0; i < papers; ++i) {
        std::vector<TdmTriple> ts;
        const auto k = rng() % 3;  // 0 -> Unknown paper
        for (std::size_t j = 0; j < k; ++j) {
            TdmTriple t{"T" + std::to_string(rng() % triples), "D", "M"};
            if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
        }
        out.push_back(paper("p" + std::to_string(i), ts));
    }
    return out;
}

std::set<TdmTriple> triples_of(const std::vector<GoldAnnotation>& a, const std::set<std::string>& docs) {
    std::set<TdmTriple> out;
    for (const auto& g : a)
        if (docs.count(g.doc_id))
            for (const auto& st : g.triples) out.insert(st.triple);
    return out;
}

}  // namespace

TEST(StandardSplit, EveryTripleOnBothSides) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<GoldAnnotation> a;
        // every triple on >= 2 papers
        for (int i = 0; i < 40; ++i)
            a.push_back(paper("p" + std::to_string(i), {{"T" + std::to_string(i % 8), "D", "M"},
                                                        {"S" + std::to_string(rng() % 4), "D", "M"}}));
        auto s = make_split(a, SplitMode::standard, static_cast<std::uint64_t>(trial));
        EXPECT_EQ(s.train.size() + s.test.size(), a.size());
        for (const auto& d : s.train) EXPECT_FALSE(s.test.count(d));
        EXPECT_EQ(triples_of(a, s.train), s.label_space);
        EXPECT_EQ(triples_of(a, s.test), s.label_space);
        EXPECT_EQ(s.test.size(), 20u);
    }
}

TEST(StandardSplit, DeterministicGivenSeed) {
    std::mt19937_64 rng(2);
    auto a = random_corpus(rng, 60, 5);
    auto filtered = filter_low_support(a, 2).annotations;
    auto x = make_split(filtered, SplitMode::standard, 77);
    auto y = make_split(filtered, SplitMode::standard, 77);
    EXPECT_EQ(x.train, y.train);
    EXPECT_EQ(x.test, y.test);
}

TEST(StandardSplit, SinglePaperSingleTripleIsInfeasible) {
    std::vector<GoldAnnotation> a = {paper("p", {{"A", "B", "C"}})};
    try {
        make_split(a, SplitMode::standard, 0);
        FAIL();
    } catch (const InfeasibleSplit& e) {
        EXPECT_NE(std::string(e.what()).find("A;B;C"), std::string::npos);
    }
}

TEST(StandardSplit, BadFractionRejected) {
    std::vector<GoldAnnotation> a = {paper("p1", {{"A", "B", "C"}}), paper("p2", {{"A", "B", "C"}})};
    EXPECT_THROW(make_split(a, SplitMode::standard, 0, 0.0), InvalidArgument);
    EXPECT_THROW(make_split(a, SplitMode::standard, 0, 1.0), InvalidArgument);
}

TEST(ZeroShotSplit, DisjointTripleSets) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto a = random_corpus(rng, 50, 30);
        CorpusSplit s;
        try {
            s = make_split(a, SplitMode::zero_shot, seed);
        } catch (const InfeasibleSplit&) {
            continue;
        }
        auto train = triples_of(a, s.train), test = triples_of(a, s.test);
        for (const auto& t : test) EXPECT_FALSE(train.count(t));
        EXPECT_FALSE(test.empty());
        EXPECT_FALSE(train.empty());
        EXPECT_EQ(s.train.size() + s.test.size(), a.size());
    }
}

TEST(ZeroShotSplit, SingleConnectedGroupIsInfeasible) {
    std::vector<GoldAnnotation> a = {paper("p1", {{"A", "B", "C"}}), paper("p2", {{"A", "B", "C"}, {"X", "Y", "Z"}}),
                                     paper("p3", {{"X", "Y", "Z"}})};
    EXPECT_THROW(make_split(a, SplitMode::zero_shot, 0), InfeasibleSplit);
}

TEST(SplitModes, Parse) {
    EXPECT_EQ(parse_split_mode("standard"), SplitMode::standard);
    EXPECT_EQ(parse_split_mode("zero_shot"), SplitMode::zero_shot);
    EXPECT_THROW(parse_split_mode("random"), InvalidArgument);
}

TEST(SplitFromLists, UsesTrainingTriplesAsLabelSpace) {
    std::vector<GoldAnnotation> a = {paper("p1", {{"A", "B", "C"}}), paper("p2", {{"X", "Y", "Z"}}), paper("p3", {})};
    auto s = split_from_lists(a, {"p1", "p3"}, {"p2"});
    EXPECT_EQ(s.label_space, (LabelSpace{{"A", "B", "C"}}));
    EXPECT_THROW(split_from_lists(a, {"p1"}, {"p1"}), InvalidArgument);
    EXPECT_THROW(split_from_lists(a, {"p9"}, {"p1"}), InvalidArgument);
}
