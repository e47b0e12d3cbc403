// tdms: command-line front end for the extraction pipeline.

#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "workspace.hpp"

namespace {

using namespace tdms;
using namespace tdms::cli;
using ojson = nlohmann::ordered_json;

void emit(const std::optional<std::string>& out, const std::string& content) {
    if (out)
        io::write_file_atomic(*out, content);
    else
        std::cout << content;
}

std::vector<std::size_t> parse_ks(const std::string& s) {
    std::vector<std::size_t> ks;
    for (const auto& part : text::split(s, ',')) {
        const auto t = text::trim(part);
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (t.empty() || pos != t.size() || v == 0) throw InvalidArgument("bad k value '" + t + "'");
        ks.push_back(v);
    }
    return ks;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string in_dir, out_dir;
    std::size_t jobs = 1;
};

void run_ingest(const IngestArgs& a) {
    RunManifest manifest("ingest");
    manifest.input("in_dir", a.in_dir);
    manifest.output("out_dir", a.out_dir);
    manifest.param("jobs", a.jobs);

    const auto files = source_files(a.in_dir);
    if (files.empty()) throw InvalidArgument("no .xml/.tdms/.txt documents in '" + a.in_dir + "'");
    fs::create_directories(a.out_dir);

    std::vector<std::vector<std::string>> warnings(files.size());
    std::vector<std::string> ids(files.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
            try {
                auto doc = load_document(files[i]);
                write_document(a.out_dir, doc);
                ids[i] = doc.doc_id;
                warnings[i] = doc.warnings;
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::max<std::size_t>(1, std::min(a.jobs, files.size())); ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ojson docs = ojson::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        for (const auto& w : warnings[i]) std::cerr << "warning\t" << ids[i] << '\t' << text::flatten_line(w) << '\n';
        docs.push_back({{"doc_id", ids[i]}, {"source", files[i].filename().string()}, {"warnings", warnings[i]}});
    }
    manifest.param("documents", docs);
    manifest.write_next_to(a.out_dir);
}

// ---------------------------------------------------------------------------

struct ReprArgs {
    std::optional<std::string> config;
    std::string docs, out;
};

void run_build_repr(const ReprArgs& a) {
    ReprConfig config;
    if (a.config) config = repr_config_from_json(io::read_file(*a.config));
    validate(config);
    std::vector<PaperRepr> papers;
    for (const auto& doc : load_corpus(a.docs)) papers.push_back(make_paper_repr(doc, config));
    io::write_file_atomic(a.out, papers_to_jsonl(papers));

    RunManifest manifest("build-repr");
    if (a.config) manifest.input("config", *a.config);
    manifest.input("docs", a.docs);
    manifest.output("repr", a.out);
    manifest.param("config", ojson::parse(to_json(config)));
    manifest.param("papers", papers.size());
    manifest.write_next_to(a.out);
}

// ---------------------------------------------------------------------------

struct InstanceArgs {
    std::string mode = "tdm";
    std::string repr, annotations, split, out;
    std::string negatives = "all";
    std::uint64_t seed = 0;
    bool skip_unknown = false;
};

void run_gen_instances(const InstanceArgs& a) {
    const auto papers = papers_from_jsonl(io::read_file(a.repr));
    const auto split = read_split(a.split);
    const auto gold = restrict_to(read_annotations(a.annotations), split.train);
    std::vector<EntailmentInstance> instances;
    if (a.mode == "tdm") {
        instances = gen_tdm_instances(papers, gold, split.label_space, !a.skip_unknown);
    } else if (a.mode == "dm") {
        instances = gen_dm_instances(papers, gold, dm_space_of(split.label_space), NegativePolicy::parse(a.negatives), a.seed);
    } else {
        throw InvalidArgument("--mode must be tdm or dm");
    }
    io::write_file_atomic(a.out, instances_to_tsv(instances));

    RunManifest manifest("gen-instances");
    manifest.input("repr", a.repr);
    manifest.input("annotations", a.annotations);
    manifest.input("split", a.split);
    manifest.output("instances", a.out);
    manifest.param("mode", a.mode);
    manifest.param("negatives", a.negatives);
    manifest.param("seed", a.seed);
    manifest.param("instances", instances.size());
    manifest.write_next_to(a.out);
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string scorer = "lexical";
    std::optional<std::string> instances, repr, annotations, split, aliases;
    std::string out;
    LexicalHyperparams lexical;
    MlcHyperparams mlc;
};

void run_train(const TrainArgs& a) {
    RunManifest manifest("train");
    manifest.param("scorer", a.scorer);
    if (a.scorer == "lexical") {
        if (!a.instances) throw InvalidArgument("train --scorer lexical needs --instances");
        const auto aliases = a.aliases ? AliasTable::from_file(*a.aliases) : AliasTable::builtin();
        const auto model = lexical_train(instances_from_tsv(io::read_file(*a.instances)), a.lexical, aliases);
        io::write_file_atomic(a.out, to_json(model));
        manifest.input("instances", *a.instances);
        manifest.param("learning_rate", a.lexical.learning_rate);
        manifest.param("max_iterations", a.lexical.max_iterations);
        manifest.param("l2", a.lexical.l2);
        manifest.param("final_loss", model.final_loss);
    } else if (a.scorer == "mlc") {
        if (!a.repr || !a.annotations || !a.split) throw InvalidArgument("train --scorer mlc needs --repr, --annotations and --split");
        const auto split = read_split(*a.split);
        const auto model = mlc_train(papers_from_jsonl(io::read_file(*a.repr)),
                                     restrict_to(read_annotations(*a.annotations), split.train), split.label_space, a.mlc);
        io::write_file_atomic(a.out, to_json(model));
        manifest.input("repr", *a.repr);
        manifest.input("annotations", *a.annotations);
        manifest.input("split", *a.split);
        manifest.param("learning_rate", a.mlc.learning_rate);
        manifest.param("max_iterations", a.mlc.max_iterations);
        manifest.param("picker_instances", model.picker_instances);
        manifest.param("picker_positives", model.picker_positives);
    } else {
        throw InvalidArgument("--scorer must be lexical or mlc");
    }
    if (a.aliases) manifest.input("aliases", *a.aliases);
    manifest.output("model", a.out);
    manifest.write_next_to(a.out);
}

// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string scorer = "lexical";
    std::optional<std::string> repr, docs, tdm_model, dm_model, model, endpoint, polarity, aliases;
    std::string split, out;
    double threshold = kDefaultThreshold;
    std::size_t jobs = 1;
};

std::vector<PaperRepr> test_papers(const std::string& repr_path, const CorpusSplit& split) {
    std::vector<PaperRepr> out;
    for (auto& p : papers_from_jsonl(io::read_file(repr_path)))
        if (split.test.count(p.doc_id)) out.push_back(std::move(p));
    std::set<std::string> have;
    for (const auto& p : out) have.insert(p.doc_id);
    for (const auto& id : split.test)
        if (!have.count(id)) throw MismatchError("test paper '" + id + "' has no representation in '" + repr_path + "'");
    return out;
}

void run_predict(const PredictArgs& a) {
    if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) throw InvalidArgument("--threshold must be in [0,1]");
    const auto split = read_split(a.split);
    RunManifest manifest("predict");
    manifest.input("split", a.split);
    manifest.param("scorer", a.scorer);
    manifest.param("threshold", a.threshold);
    manifest.param("jobs", a.jobs);

    std::vector<PaperPrediction> predictions;
    if (a.scorer == "lexical" || a.scorer == "remote") {
        if (!a.repr) throw InvalidArgument("predict --scorer " + a.scorer + " needs --repr");
        const auto papers = test_papers(*a.repr, split);
        manifest.input("repr", *a.repr);
        if (a.scorer == "lexical") {
            if (!a.tdm_model || !a.dm_model) throw InvalidArgument("predict --scorer lexical needs --tdm-model and --dm-model");
            LexicalScorer tdm(lexical_model_from_json(io::read_file(*a.tdm_model)));
            LexicalScorer dm(lexical_model_from_json(io::read_file(*a.dm_model)));
            predictions = predict_corpus(papers, split.label_space, tdm, dm, a.threshold, a.jobs);
            manifest.input("tdm_model", *a.tdm_model);
            manifest.input("dm_model", *a.dm_model);
        } else {
            if (!a.endpoint) throw InvalidArgument("predict --scorer remote needs --endpoint");
            RemoteScorer tdm({*a.endpoint, "tdm"});
            RemoteScorer dm({*a.endpoint, "dm"});
            predictions = predict_corpus(papers, split.label_space, tdm, dm, a.threshold, a.jobs);
            manifest.param("endpoint", *a.endpoint);
        }
    } else if (a.scorer == "mlc") {
        if (!a.repr || !a.model) throw InvalidArgument("predict --scorer mlc needs --repr and --model");
        const auto model = mlc_model_from_json(io::read_file(*a.model));
        for (const auto& p : test_papers(*a.repr, split)) predictions.push_back({p.doc_id, mlc_predict(p, model)});
        manifest.input("repr", *a.repr);
        manifest.input("model", *a.model);
    } else if (a.scorer == "sm") {
        if (!a.docs) throw InvalidArgument("predict --scorer sm needs --docs");
        const auto polarity = a.polarity ? MetricPolarity::load_tsv(io::read_file(*a.polarity)) : MetricPolarity::defaults();
        const auto aliases = a.aliases ? AliasTable::from_file(*a.aliases) : AliasTable::builtin();
        std::set<std::string> have;
        for (const auto& doc : load_corpus(*a.docs)) {
            if (!split.test.count(doc.doc_id)) continue;
            have.insert(doc.doc_id);
            predictions.push_back({doc.doc_id, string_match_predict(doc, split.label_space, polarity, aliases)});
        }
        for (const auto& id : split.test)
            if (!have.count(id)) throw MismatchError("test paper '" + id + "' is missing from '" + *a.docs + "'");
        manifest.input("docs", *a.docs);
        if (a.polarity) manifest.input("polarity", *a.polarity);
        if (a.aliases) manifest.input("aliases", *a.aliases);
    } else {
        throw InvalidArgument("--scorer must be lexical, remote, mlc or sm");
    }

    io::write_file_atomic(a.out, predictions_to_tsv(predictions));
    std::size_t unknown = 0;
    for (const auto& p : predictions) unknown += p.unknown();
    manifest.output("predictions", a.out);
    manifest.param("papers", predictions.size());
    manifest.param("unknown", unknown);
    manifest.write_next_to(a.out);
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string predictions, annotations;
    std::optional<std::string> split, out;
    std::vector<std::string> settings{"a"};
    bool pk = false;
    std::string ks = "1,3,5,10";
    std::string format = "text";
};

void run_evaluate(const EvaluateArgs& a) {
    if (a.format != "text" && a.format != "tsv") throw InvalidArgument("--format must be text or tsv");
    const auto predictions = predictions_from_tsv(io::read_file(a.predictions));
    auto gold = read_annotations(a.annotations);
    std::optional<CorpusSplit> split;
    if (a.split) {
        split = read_split(*a.split);
        gold = restrict_to(gold, split->test);
    }

    std::string report;
    if (a.pk) {
        const auto ks = parse_ks(a.ks);
        const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
        std::map<TdmTriple, std::set<std::string>> relevant;
        for (const auto& g : gold)
            for (const auto& st : g.triples) relevant[st.triple].insert(g.doc_id);
        std::vector<PkRow> rows;
        for (const auto& [triple, docs] : relevant) {
            if (split && !split->label_space.count(triple)) continue;
            rows.push_back(precision_at_k(build_leaderboard(predictions, triple, kmax), docs, ks));
        }
        const auto pk = pk_report(std::move(rows), ks);
        report = a.format == "tsv" ? render_pk_tsv(pk) : render_pk_text(pk);
    } else {
        std::vector<std::pair<std::string, EvalReport>> rows;
        for (const auto& s : a.settings) {
            const auto setting = parse_setting(s);
            rows.emplace_back(std::string("setting ") + s, evaluate(predictions, gold, setting));
        }
        report = a.format == "tsv" ? render_eval_tsv(rows) : render_eval_text(rows);
    }
    emit(a.out, report);

    if (a.out) {
        RunManifest manifest("evaluate");
        manifest.input("predictions", a.predictions);
        manifest.input("annotations", a.annotations);
        if (a.split) manifest.input("split", *a.split);
        manifest.output("report", *a.out);
        manifest.param("pk", a.pk);
        manifest.param(a.pk ? "ks" : "settings", a.pk ? ojson(a.ks) : ojson(a.settings));
        manifest.write_next_to(*a.out);
    }
}

// ---------------------------------------------------------------------------

struct LeaderboardArgs {
    std::string predictions, triple;
    std::size_t k = 10;
    std::optional<std::string> out;
};

void run_leaderboard(const LeaderboardArgs& a) {
    if (a.k == 0) throw InvalidArgument("--k must be at least 1");
    const auto triple = parse_triple(a.triple);
    const auto board = build_leaderboard(predictions_from_tsv(io::read_file(a.predictions)), triple, a.k);
    emit(a.out, leaderboard_to_tsv(board));
    if (a.out) {
        RunManifest manifest("leaderboard");
        manifest.input("predictions", a.predictions);
        manifest.output("leaderboard", *a.out);
        manifest.param("triple", a.triple);
        manifest.param("k", a.k);
        manifest.write_next_to(*a.out);
    }
}

// ---------------------------------------------------------------------------

struct SplitArgs {
    std::string mode = "standard";
    std::uint64_t seed = 0;
    double test_fraction = 0.5;
    std::string annotations, out;
};

void run_split(const SplitArgs& a) {
    const auto split = make_split(read_annotations(a.annotations), parse_split_mode(a.mode), a.seed, a.test_fraction);
    fs::create_directories(a.out);
    write_split(a.out, split);
    RunManifest manifest("split");
    manifest.input("annotations", a.annotations);
    manifest.output("split_dir", a.out);
    manifest.param("mode", a.mode);
    manifest.param("seed", a.seed);
    manifest.param("test_fraction", a.test_fraction);
    manifest.param("train", split.train.size());
    manifest.param("test", split.test.size());
    manifest.param("label_space", split.label_space.size());
    manifest.write_next_to(a.out);
}

int fail(std::string_view kind, std::string_view message) {
    std::cerr << "error\t" << kind << '\t' << text::flatten_line(message) << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TDMS leaderboard extraction pipeline"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "TEI / structured documents -> canonical documents and tables");
    c_ingest->add_option("in-dir", ingest.in_dir)->required();
    c_ingest->add_option("out-dir", ingest.out_dir)->required();
    c_ingest->add_option("--jobs", ingest.jobs)->envname("TDMS_JOBS")->check(CLI::PositiveNumber);

    ReprArgs repr;
    auto* c_repr = app.add_subcommand("build-repr", "Documents -> DocTAETs and score contexts (JSONL)");
    c_repr->add_option("--config", repr.config, "ReprConfig JSON")->envname("TDMS_REPR_CONFIG");
    c_repr->add_option("--docs", repr.docs)->required();
    c_repr->add_option("--out", repr.out)->required();

    InstanceArgs inst;
    auto* c_inst = app.add_subcommand("gen-instances", "Entailment training instances (TSV)");
    c_inst->add_option("--mode", inst.mode)->check(CLI::IsMember({"tdm", "dm"}));
    c_inst->add_option("--repr", inst.repr)->required();
    c_inst->add_option("--annotations", inst.annotations)->required();
    c_inst->add_option("--split", inst.split, "split directory")->required();
    c_inst->add_option("--out", inst.out)->required();
    c_inst->add_option("--negatives", inst.negatives, "all | sampled:K")->envname("TDMS_NEGATIVES");
    c_inst->add_option("--seed", inst.seed)->envname("TDMS_SEED");
    c_inst->add_flag("--skip-unknown", inst.skip_unknown, "no negatives from Unknown papers");

    TrainArgs train;
    auto* c_train = app.add_subcommand("train", "Train a native model");
    c_train->add_option("--scorer", train.scorer)->check(CLI::IsMember({"lexical", "mlc"}));
    c_train->add_option("--instances", train.instances);
    c_train->add_option("--repr", train.repr);
    c_train->add_option("--annotations", train.annotations);
    c_train->add_option("--split", train.split);
    c_train->add_option("--aliases", train.aliases)->envname("TDMS_ALIASES");
    c_train->add_option("--out", train.out)->required();
    c_train->add_option("--learning-rate", train.lexical.learning_rate)->envname("TDMS_LEARNING_RATE");
    c_train->add_option("--iterations", train.lexical.max_iterations)->envname("TDMS_ITERATIONS");
    c_train->add_option("--l2", train.lexical.l2)->envname("TDMS_L2");

    PredictArgs pred;
    auto* c_pred = app.add_subcommand("predict", "Predict TDMS tuples for the test papers");
    c_pred->add_option("--scorer", pred.scorer)->check(CLI::IsMember({"lexical", "remote", "mlc", "sm"}));
    c_pred->add_option("--threshold", pred.threshold)->envname("TDMS_THRESHOLD");
    c_pred->add_option("--repr", pred.repr);
    c_pred->add_option("--docs", pred.docs);
    c_pred->add_option("--split", pred.split)->required();
    c_pred->add_option("--tdm-model", pred.tdm_model);
    c_pred->add_option("--dm-model", pred.dm_model);
    c_pred->add_option("--model", pred.model, "MLC model");
    c_pred->add_option("--endpoint", pred.endpoint)->envname("TDMS_ENDPOINT");
    c_pred->add_option("--polarity", pred.polarity)->envname("TDMS_POLARITY");
    c_pred->add_option("--aliases", pred.aliases)->envname("TDMS_ALIASES");
    c_pred->add_option("--jobs", pred.jobs)->envname("TDMS_JOBS")->check(CLI::PositiveNumber);
    c_pred->add_option("--out", pred.out)->required();

    EvaluateArgs eval;
    auto* c_eval = app.add_subcommand("evaluate", "Score predictions against gold annotations");
    c_eval->add_option("--predictions", eval.predictions)->required();
    c_eval->add_option("--annotations", eval.annotations)->required();
    c_eval->add_option("--split", eval.split, "restrict gold to the split's test papers");
    c_eval->add_option("--setting", eval.settings, "a, b or c (repeatable)")->delimiter(',');
    c_eval->add_flag("--pk", eval.pk, "report P@k per leaderboard instead");
    c_eval->add_option("--ks", eval.ks);
    c_eval->add_option("--format", eval.format)->check(CLI::IsMember({"text", "tsv"}));
    c_eval->add_option("--out", eval.out);

    LeaderboardArgs board;
    auto* c_board = app.add_subcommand("leaderboard", "Rank papers for one task/dataset/metric");
    c_board->add_option("--predictions", board.predictions)->required();
    c_board->add_option("--triple", board.triple, "\"task;dataset;metric\"")->required();
    c_board->add_option("--k", board.k);
    c_board->add_option("--out", board.out);

    SplitArgs split;
    auto* c_split = app.add_subcommand("split", "Train/test split of an annotation file");
    c_split->add_option("--mode", split.mode)->check(CLI::IsMember({"standard", "zero_shot", "zero-shot"}));
    c_split->add_option("--seed", split.seed)->envname("TDMS_SEED");
    c_split->add_option("--test-fraction", split.test_fraction);
    c_split->add_option("--annotations", split.annotations)->required();
    c_split->add_option("--out", split.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("usage", e.what());
        return 2;
    }

    try {
        if (*c_ingest) run_ingest(ingest);
        if (*c_repr) run_build_repr(repr);
        if (*c_inst) run_gen_instances(inst);
        if (*c_train) {
            train.mlc.threshold = kDefaultThreshold;
            run_train(train);
        }
        if (*c_pred) run_predict(pred);
        if (*c_eval) run_evaluate(eval);
        if (*c_board) run_leaderboard(board);
        if (*c_split) run_split(split);
    } catch (const tdms::Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("io", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
