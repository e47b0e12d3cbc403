#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "detail/random.hpp"
#include "tdms/error.hpp"
#include "tdms/taxonomy.hpp"
#include "tdms/text.hpp"

namespace tdms {

namespace {

using detail::shuffle;

std::string list_triples(const std::vector<TdmTriple>& triples) {
    std::string out;
    for (const auto& t : triples) {
        if (!out.empty()) out += ", ";
        out += t.task + ";" + t.dataset + ";" + t.metric;
    }
    return out;
}

std::size_t target_test_size(std::size_t n, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("test_fraction must be in (0, 1)");
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

// Puts `doc` on whichever side is further below its target share.
void balance_assign(CorpusSplit& split, const std::string& doc, std::size_t total, std::size_t test_target) {
    const double test_gap = static_cast<double>(test_target) - static_cast<double>(split.test.size());
    const double train_gap = static_cast<double>(total - test_target) - static_cast<double>(split.train.size());
    (test_gap > train_gap ? split.test : split.train).insert(doc);
}

CorpusSplit standard_split(const std::vector<GoldAnnotation>& annotations, std::mt19937_64& rng, double fraction) {
    std::vector<const GoldAnnotation*> papers;
    for (const auto& a : annotations) papers.push_back(&a);
    shuffle(papers, rng);
    const std::size_t test_target = target_test_size(papers.size(), fraction);

    std::map<TdmTriple, std::vector<const GoldAnnotation*>> carriers;
    for (const auto* p : papers)
        for (const auto& st : p->triples) carriers[st.triple].push_back(p);

    std::vector<TdmTriple> blocking;
    for (const auto& [t, ps] : carriers)
        if (ps.size() < 2) blocking.push_back(t);
    if (!blocking.empty())
        throw InfeasibleSplit("standard split needs every triple on at least two papers; blocking: " +
                              list_triples(blocking));

    // rarest triples first, so scarce papers are not spent on common labels
    std::vector<TdmTriple> order;
    for (const auto& [t, _] : carriers) order.push_back(t);
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto& x, const auto& y) { return carriers[x].size() < carriers[y].size(); });

    CorpusSplit split;
    split.label_space = label_space_of(annotations);
    std::set<TdmTriple> in_train, in_test;
    auto assigned = [&](const GoldAnnotation* p) { return split.train.count(p->doc_id) || split.test.count(p->doc_id); };
    auto place = [&](const GoldAnnotation* p, bool test) {
        (test ? split.test : split.train).insert(p->doc_id);
        for (const auto& st : p->triples) (test ? in_test : in_train).insert(st.triple);
    };

    for (const auto& t : order) {
        for (bool test : {false, true}) {
            auto& covered = test ? in_test : in_train;
            if (covered.count(t)) continue;
            auto& ps = carriers[t];
            auto it = std::find_if(ps.begin(), ps.end(), [&](auto* p) { return !assigned(p); });
            if (it == ps.end()) {
                blocking.push_back(t);
                break;
            }
            place(*it, test);
        }
    }
    if (!blocking.empty())
        throw InfeasibleSplit("could not place every triple on both sides; blocking: " + list_triples(blocking));

    for (const auto* p : papers)
        if (!assigned(p)) balance_assign(split, p->doc_id, papers.size(), test_target);
    return split;
}

CorpusSplit zero_shot_split(const std::vector<GoldAnnotation>& annotations, std::mt19937_64& rng, double fraction) {
    // Papers sharing a triple must land on the same side: group them into
    // connected components of the paper/triple graph.
    std::vector<std::size_t> parent(annotations.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<TdmTriple, std::size_t> first_carrier;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        for (const auto& st : annotations[i].triples) {
            auto [it, inserted] = first_carrier.emplace(st.triple, i);
            if (!inserted) parent[find(i)] = find(it->second);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < annotations.size(); ++i) groups[find(i)].push_back(i);

    std::vector<std::vector<std::size_t>> labelled, unknown;
    for (auto& [_, members] : groups) {
        bool has_triples = !annotations[members.front()].triples.empty();
        (has_triples ? labelled : unknown).push_back(std::move(members));
    }
    if (labelled.size() < 2) {
        std::vector<TdmTriple> all;
        for (const auto& [t, _] : first_carrier) all.push_back(t);
        throw InfeasibleSplit("zero-shot split needs at least two groups of papers with disjoint triples; blocking: " +
                              list_triples(all));
    }
    shuffle(labelled, rng);
    shuffle(unknown, rng);

    CorpusSplit split;
    split.label_space = label_space_of(annotations);
    const std::size_t test_target = target_test_size(annotations.size(), fraction);
    auto put = [&](const std::vector<std::size_t>& members, bool test) {
        for (auto i : members) (test ? split.test : split.train).insert(annotations[i].doc_id);
    };
    put(labelled[0], true);
    put(labelled[1], false);
    for (std::size_t g = 2; g < labelled.size(); ++g) {
        const double test_gap = static_cast<double>(test_target) - static_cast<double>(split.test.size());
        const double train_gap =
            static_cast<double>(annotations.size() - test_target) - static_cast<double>(split.train.size());
        put(labelled[g], test_gap > train_gap);
    }
    for (const auto& members : unknown)
        for (auto i : members) balance_assign(split, annotations[i].doc_id, annotations.size(), test_target);
    return split;
}

}  // namespace

SplitMode parse_split_mode(std::string_view s) {
    if (s == "standard") return SplitMode::standard;
    if (s == "zero_shot" || s == "zero-shot") return SplitMode::zero_shot;
    throw InvalidArgument("unknown split mode '" + std::string(s) + "'");
}

CorpusSplit make_split(const std::vector<GoldAnnotation>& annotations, SplitMode mode, std::uint64_t seed,
                       double test_fraction) {
    index_by_doc(annotations);  // rejects duplicate doc_ids
    std::vector<GoldAnnotation> sorted = annotations;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
    std::mt19937_64 rng(seed);
    return mode == SplitMode::standard ? standard_split(sorted, rng, test_fraction)
                                       : zero_shot_split(sorted, rng, test_fraction);
}

CorpusSplit split_from_lists(const std::vector<GoldAnnotation>& annotations, const std::set<std::string>& train,
                             const std::set<std::string>& test) {
    auto idx = index_by_doc(annotations);
    for (const auto& d : train) {
        if (test.count(d)) throw InvalidArgument("doc " + d + " is in both train and test");
        if (!idx.count(d)) throw InvalidArgument("train doc " + d + " has no annotation");
    }
    for (const auto& d : test)
        if (!idx.count(d)) throw InvalidArgument("test doc " + d + " has no annotation");
    return {train, test, label_space_of(annotations, train)};
}

}  // namespace tdms
