#include "tdms/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "detail/builtin_data.hpp"
#include "json.hpp"
#include "tdms/error.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> canonical_words(std::string_view s, const AliasTable& aliases) {
    return aliases.canonicalize_tokens(text::word_tokens(s));
}

bool mentions(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
    return !needle.empty() && text::contains_sequence(haystack, needle);
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

using SparseRow = std::vector<std::pair<std::size_t, double>>;

double dot(const std::vector<double>& w, const SparseRow& x) {
    double z = w.back();
    for (const auto& [j, v] : x) z += w[j] * v;
    return z;
}

// Full-batch gradient descent on the l2-regularized logistic loss. Returns
// `dims` weights followed by the bias.
std::vector<double> train_logistic(const std::vector<SparseRow>& rows, const std::vector<bool>& labels,
                                   std::size_t dims, const MlcHyperparams& hyper) {
    std::vector<double> w(dims + 1, 0.0), grad(dims + 1);
    const double n = static_cast<double>(rows.size());
    for (std::size_t it = 0; it < hyper.max_iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double err = sigmoid(dot(w, rows[i])) - (labels[i] ? 1.0 : 0.0);
            for (const auto& [j, v] : rows[i]) grad[j] += err * v;
            grad[dims] += err;
        }
        for (std::size_t j = 0; j < dims; ++j) w[j] -= hyper.learning_rate * (grad[j] / n + hyper.l2 * w[j]);
        w[dims] -= hyper.learning_rate * grad[dims] / n;
    }
    return w;
}

std::string strip_marker(std::string_view s) {
    std::string out;
    for (const auto& tok : text::whitespace_tokens(s)) {
        if (tok == kPartMarker) continue;
        if (!out.empty()) out += ' ';
        out += tok;
    }
    return out;
}

bool matches_any_score(const ScoreContext& sc, const GoldAnnotation& gold) {
    for (const auto& st : gold.triples)
        if (st.score && match_score(st.score->value, sc.value, sc.percent_flag, st.score->percent_flag)) return true;
    return false;
}

json vocabulary_json(const TfidfVocabulary& v) {
    json terms = json::array();
    std::vector<std::string> by_index(v.index.size());
    for (const auto& [term, i] : v.index) by_index.at(i) = term;
    for (std::size_t i = 0; i < by_index.size(); ++i) terms.push_back(json::array({by_index[i], v.idf[i]}));
    return terms;
}

TfidfVocabulary vocabulary_from(const json& terms) {
    TfidfVocabulary v;
    for (const auto& t : terms) {
        v.index.emplace(t.at(0).get<std::string>(), v.idf.size());
        v.idf.push_back(t.at(1).get<double>());
    }
    return v;
}

}  // namespace

void MetricPolarity::set(std::string_view metric, Polarity p) { table_[text::fold_case(text::trim(metric))] = p; }

Polarity MetricPolarity::of(std::string_view metric) const {
    auto it = table_.find(text::fold_case(text::trim(metric)));
    return it == table_.end() ? Polarity::higher_better : it->second;
}

MetricPolarity MetricPolarity::load_tsv(std::string_view tsv) {
    MetricPolarity out;
    std::size_t n = 0;
    for (auto line : text::split(tsv, '\n')) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 2) throw FormatError("polarity line " + std::to_string(n) + ": expected 2 columns");
        if (cols[1] == "higher_better")
            out.set(cols[0], Polarity::higher_better);
        else if (cols[1] == "lower_better")
            out.set(cols[0], Polarity::lower_better);
        else
            throw FormatError("polarity line " + std::to_string(n) + ": unknown polarity '" + cols[1] + "'");
    }
    return out;
}

MetricPolarity MetricPolarity::defaults() {
    static const MetricPolarity table = load_tsv(builtin::kMetricPolarityTsv);
    return table;
}

const Section* introduction_of(const RawDocument& doc) {
    if (doc.sections.empty()) return nullptr;
    for (const auto& s : doc.sections)
        if (text::fold_case(s.heading).find("introduction") != std::string::npos) return &s;
    return &doc.sections.front();
}

std::vector<TdmsTuple> string_match_predict(const RawDocument& doc, const LabelSpace& taxonomy,
                                            const MetricPolarity& polarity, const AliasTable& aliases) {
    std::string front = doc.title + "\n" + doc.abstract;
    if (const Section* intro = introduction_of(doc)) front += "\n" + intro->heading + "\n" + intro->body;
    const auto front_words = canonical_words(front, aliases);

    struct Ctx {
        const ScoreContext* sc;
        std::vector<std::string> caption;
        std::vector<std::vector<std::string>> headers;
    };
    const auto contexts = build_score_contexts(doc, ReprConfig{});
    std::vector<Ctx> ctxs;
    for (const auto& sc : contexts) {
        Ctx c{&sc, canonical_words(sc.caption, aliases), {}};
        for (const auto& h : sc.headers) c.headers.push_back(canonical_words(h, aliases));
        ctxs.push_back(std::move(c));
    }
    auto in_headers = [](const Ctx& c, const std::vector<std::string>& needle) {
        return std::any_of(c.headers.begin(), c.headers.end(), [&](const auto& h) { return mentions(h, needle); });
    };

    std::vector<TdmsTuple> out;
    for (const auto& t : taxonomy) {
        if (!mentions(front_words, canonical_words(t.task, aliases))) continue;
        const auto dataset = canonical_words(t.dataset, aliases);
        const auto metric = canonical_words(t.metric, aliases);
        const bool lower = polarity.of(t.metric) == Polarity::lower_better;
        const ScoreContext* best = nullptr;
        for (const auto& c : ctxs) {
            const bool hit = (mentions(c.caption, dataset) && in_headers(c, metric)) ||
                             (mentions(c.caption, metric) && in_headers(c, dataset));
            if (!hit) continue;
            if (!best) {
                best = c.sc;
                continue;
            }
            const double v = c.sc->value.to_double(), b = best->value.to_double();
            if (lower ? v < b : v > b) best = c.sc;
        }
        if (!best) continue;
        out.push_back({doc.doc_id, t, 1.0, best->value, best->percent_flag, 1.0,
                       Provenance{best->table_id, best->row, best->col}});
    }
    return out;
}

TfidfVocabulary TfidfVocabulary::fit(const std::vector<std::string>& documents) {
    std::map<std::string, std::size_t> df;
    for (const auto& d : documents) {
        auto words = text::word_tokens(strip_marker(d));
        std::set<std::string> seen(words.begin(), words.end());
        for (const auto& w : seen) ++df[w];
    }
    TfidfVocabulary v;
    const double n = static_cast<double>(documents.size());
    for (const auto& [w, count] : df) {
        v.index.emplace(w, v.idf.size());
        v.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return v;
}

std::vector<std::pair<std::size_t, double>> TfidfVocabulary::transform(std::string_view text) const {
    std::map<std::size_t, double> tf;
    for (const auto& w : text::word_tokens(strip_marker(text)))
        if (auto it = index.find(w); it != index.end()) tf[it->second] += 1.0;
    SparseRow row;
    double norm = 0;
    for (const auto& [j, count] : tf) {
        const double v = count * idf[j];
        row.emplace_back(j, v);
        norm += v * v;
    }
    if (norm > 0) {
        norm = std::sqrt(norm);
        for (auto& e : row) e.second /= norm;
    }
    return row;
}

MlcModel mlc_train(const std::vector<PaperRepr>& papers, const std::vector<GoldAnnotation>& annotations,
                   const LabelSpace& label_space, const MlcHyperparams& hyper) {
    if (label_space.empty()) throw TrainingError("MLC training needs a non-empty label space");
    const auto gold = index_by_doc(annotations);

    std::vector<const PaperRepr*> used;
    std::vector<const GoldAnnotation*> used_gold;
    for (const auto& p : papers) {
        auto it = gold.find(p.doc_id);
        if (it == gold.end() || it->second->unknown_flag || it->second->triples.empty()) continue;
        used.push_back(&p);
        used_gold.push_back(it->second);
    }

    MlcModel model;
    model.threshold = hyper.threshold;
    model.classes.assign(label_space.begin(), label_space.end());

    std::vector<std::string> docs;
    for (const auto* p : used) docs.push_back(p->doctaet.rendered);
    model.vocabulary = TfidfVocabulary::fit(docs);
    std::vector<SparseRow> rows;
    for (const auto& d : docs) rows.push_back(model.vocabulary.transform(d));

    std::size_t populated = 0;
    std::vector<std::vector<bool>> labels(model.classes.size(), std::vector<bool>(used.size(), false));
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        bool any = false;
        for (std::size_t i = 0; i < used.size(); ++i)
            for (const auto& st : used_gold[i]->triples)
                if (st.triple == model.classes[c]) labels[c][i] = any = true;
        populated += any;
    }
    if (populated < 2) throw TrainingError("MLC training needs at least two classes with a training paper");

    const std::size_t dims = model.vocabulary.idf.size();
    for (std::size_t c = 0; c < model.classes.size(); ++c)
        model.weights.push_back(train_logistic(rows, labels[c], dims, hyper));

    // Score picker over (paper, context) pairs.
    std::vector<const ScoreContext*> ctxs;
    std::vector<bool> ctx_labels;
    for (std::size_t i = 0; i < used.size(); ++i) {
        const bool scored = std::any_of(used_gold[i]->triples.begin(), used_gold[i]->triples.end(),
                                        [](const ScoredTriple& st) { return st.score.has_value(); });
        if (!scored) continue;
        for (const auto& sc : used[i]->contexts) {
            ctxs.push_back(&sc);
            ctx_labels.push_back(matches_any_score(sc, *used_gold[i]));
        }
    }
    model.picker_instances = ctxs.size();
    model.picker_positives = static_cast<std::size_t>(std::count(ctx_labels.begin(), ctx_labels.end(), true));
    if (model.picker_positives > 0 && model.picker_positives < model.picker_instances) {
        std::vector<std::string> sc_docs;
        for (const auto* sc : ctxs) sc_docs.push_back(sc->rendered);
        model.picker_vocabulary = TfidfVocabulary::fit(sc_docs);
        std::vector<SparseRow> sc_rows;
        for (const auto& d : sc_docs) sc_rows.push_back(model.picker_vocabulary->transform(d));
        model.picker_weights = train_logistic(sc_rows, ctx_labels, model.picker_vocabulary->idf.size(), hyper);
    }
    return model;
}

std::vector<double> mlc_class_probabilities(const MlcModel& model, std::string_view doctaet) {
    const auto row = model.vocabulary.transform(doctaet);
    std::vector<double> out;
    out.reserve(model.classes.size());
    for (const auto& w : model.weights) out.push_back(sigmoid(dot(w, row)));
    return out;
}

std::vector<TdmsTuple> mlc_predict(const PaperRepr& paper, const MlcModel& model) {
    if (model.classes.empty()) return {};
    const auto probs = mlc_class_probabilities(model, paper.doctaet.rendered);
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < probs.size(); ++c)
        if (probs[c] > model.threshold) chosen.push_back(c);
    if (chosen.empty())
        chosen.push_back(static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
    std::stable_sort(chosen.begin(), chosen.end(), [&](auto a, auto b) { return probs[a] > probs[b]; });

    const ScoreContext* pick = nullptr;
    double pick_p = -1;
    if (model.picker_vocabulary) {
        for (const auto& sc : paper.contexts) {
            const double p = sigmoid(dot(model.picker_weights, model.picker_vocabulary->transform(sc.rendered)));
            if (p > pick_p) {
                pick = &sc;
                pick_p = p;
            }
        }
    } else if (model.picker_positives > 0 && !paper.contexts.empty()) {
        // every training context was positive: a constant picker, so the
        // earliest context wins the tie
        pick = &paper.contexts.front();
        pick_p = 1.0;
    }

    std::vector<TdmsTuple> out;
    for (auto c : chosen) {
        TdmsTuple t{paper.doc_id, model.classes[c], probs[c], std::nullopt, false, std::nullopt, std::nullopt};
        if (pick) {
            t.score = pick->value;
            t.score_percent = pick->percent_flag;
            t.score_confidence = pick_p;
            t.provenance = Provenance{pick->table_id, pick->row, pick->col};
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::string to_json(const MlcModel& model) {
    json j;
    j["kind"] = "mlc";
    j["threshold"] = model.threshold;
    j["vocabulary"] = vocabulary_json(model.vocabulary);
    json classes = json::array();
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        const auto& t = model.classes[c];
        classes.push_back({{"task", t.task}, {"dataset", t.dataset}, {"metric", t.metric}, {"weights", model.weights[c]}});
    }
    j["classes"] = classes;
    j["picker_instances"] = model.picker_instances;
    j["picker_positives"] = model.picker_positives;
    if (model.picker_vocabulary) {
        j["picker"] = {{"vocabulary", vocabulary_json(*model.picker_vocabulary)}, {"weights", model.picker_weights}};
    }
    return j.dump();
}

MlcModel mlc_model_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        if (j.at("kind") != "mlc") throw FormatError("not an MLC model");
        MlcModel m;
        m.threshold = j.at("threshold").get<double>();
        m.vocabulary = vocabulary_from(j.at("vocabulary"));
        for (const auto& c : j.at("classes")) {
            m.classes.push_back({c.at("task"), c.at("dataset"), c.at("metric")});
            m.weights.push_back(c.at("weights").get<std::vector<double>>());
            if (m.weights.back().size() != m.vocabulary.idf.size() + 1)
                throw FormatError("MLC class weight vector has the wrong length");
        }
        m.picker_instances = j.at("picker_instances").get<std::size_t>();
        m.picker_positives = j.at("picker_positives").get<std::size_t>();
        if (j.contains("picker")) {
            m.picker_vocabulary = vocabulary_from(j["picker"].at("vocabulary"));
            m.picker_weights = j["picker"].at("weights").get<std::vector<double>>();
            if (m.picker_weights.size() != m.picker_vocabulary->idf.size() + 1)
                throw FormatError("picker weight vector has the wrong length");
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad MLC model JSON: ") + e.what());
    }
}

}  // namespace tdms
