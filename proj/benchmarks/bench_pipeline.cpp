#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tdms/tdms.hpp"

using namespace tdms;

namespace {

std::string prose(std::size_t sentences, std::uint64_t seed) {
    static const std::vector<std::string> vocab = {"we",     "propose", "a",      "model", "for", "parsing",
                                                   "et al.", "e.g.",    "Fig. 2", "shows", "the", "results"};
    std::mt19937_64 rng(seed);
    std::string out;
    for (std::size_t s = 0; s < sentences; ++s) {
        out += "The";
        for (int w = 0; w < 14; ++w) out += " " + vocab[rng() % vocab.size()];
        out += ". ";
    }
    return out;
}

std::string results_paper(std::size_t tables) {
    std::string out = "#TITLE Benchmark paper\n#ABSTRACT\n" + prose(6, 1) + "\n#SECTION Experiments\n" + prose(40, 2) + "\n";
    for (std::size_t t = 0; t < tables; ++t) {
        out += "#TABLE Results on dataset " + std::to_string(t) + "\n";
        out += "{rows=2}System | {cols=3}Test\nCoref | NER | Link\n";
        for (int r = 0; r < 20; ++r)
            out += "Model " + std::to_string(r) + " | " + std::to_string(70 + r) + ".1 | **" + std::to_string(80 + r) +
                   ".25** | " + std::to_string(60 + r) + ".5%\n";
    }
    return out;
}

const LexicalModel& model() {
    static const LexicalModel m = [] {
        std::vector<EntailmentInstance> inst;
        for (int i = 0; i < 20; ++i) {
            std::string ctx = "we study task" + std::to_string(i) + " on data" + std::to_string(i);
            for (int j = 0; j < 20; ++j)
                inst.push_back({ctx, "task" + std::to_string(j) + " ; data" + std::to_string(j) + " ; m", i == j, "d",
                                InstanceOrigin::tdm});
        }
        return lexical_train(inst);
    }();
    return m;
}

}  // namespace

static void BM_SplitSentences(benchmark::State& state) {
    const std::string body = prose(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(split_sentences(body));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * body.size()));
}
BENCHMARK(BM_SplitSentences)->Arg(100)->Arg(1000);

static void BM_ExtractTables(benchmark::State& state) {
    const std::string paper = results_paper(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(extract_tables(paper, SourceFormat::structured));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtractTables)->Arg(1)->Arg(10);

static void BM_ParseTei(benchmark::State& state) {
    const std::string xml = io::read_file(TDMS_FIXTURE_DIR "/tei/figure1.xml");
    for (auto _ : state) benchmark::DoNotOptimize(parse_tei(xml, "fig"));
}
BENCHMARK(BM_ParseTei);

static void BM_BuildDocTaet(benchmark::State& state) {
    const RawDocument doc = parse_structured(results_paper(5), "b");
    for (auto _ : state) benchmark::DoNotOptimize(make_paper_repr(doc, ReprConfig{}));
}
BENCHMARK(BM_BuildDocTaet);

static void BM_LexicalScore(benchmark::State& state) {
    LexicalScorer scorer(model());
    ScoreRequest req;
    const std::string ctx = prose(30, 4) + " we study task3 on data3";
    for (int64_t i = 0; i < state.range(0); ++i)
        req.pairs.push_back({ctx, "task" + std::to_string(i) + " ; data" + std::to_string(i) + " ; m"});
    for (auto _ : state) benchmark::DoNotOptimize(scorer.score(req));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LexicalScore)->Arg(77)->Arg(1000);

static void BM_Evaluate(benchmark::State& state) {
    std::vector<GoldAnnotation> gold;
    std::vector<PaperPrediction> pred;
    std::mt19937_64 rng(5);
    for (int64_t d = 0; d < state.range(0); ++d) {
        std::string id = "d" + std::to_string(d);
        GoldAnnotation g{id, {}, false};
        PaperPrediction p{id, {}};
        for (int t = 0; t < 4; ++t) {
            TdmTriple tr{"t" + std::to_string(rng() % 30), "d", "m"};
            if (std::none_of(g.triples.begin(), g.triples.end(), [&](auto& s) { return s.triple == tr; }))
                g.triples.push_back({tr, std::nullopt});
            if (std::none_of(p.tuples.begin(), p.tuples.end(), [&](auto& s) { return s.triple == tr; }))
                p.tuples.push_back({id, tr, 0.9, std::nullopt, false, std::nullopt, std::nullopt});
        }
        gold.push_back(g);
        pred.push_back(p);
    }
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(pred, gold, EvalSetting::a));
}
BENCHMARK(BM_Evaluate)->Arg(1000);

BENCHMARK_MAIN();
