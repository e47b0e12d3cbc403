#include <gtest/gtest.h>

#include "tdms/error.hpp"
#include "tdms/io.hpp"
#include "tdms/taxonomy.hpp"
#include "tdms/text.hpp"

using namespace tdms;

namespace {

GoldAnnotation paper(std::string id, std::vector<TdmTriple> triples) {
    GoldAnnotation g{std::move(id), {}, triples.empty()};
    for (auto& t : triples) g.triples.push_back({std::move(t), std::nullopt});
    return g;
}

}  // namespace

TEST(Triple, ValidateRejectsEmptyAndSeparator) {
    EXPECT_NO_THROW(validate(TdmTriple{"a", "b", "c"}));
    EXPECT_THROW(validate(TdmTriple{"", "b", "c"}), LabelError);
    EXPECT_THROW(validate(TdmTriple{"a", "b;x", "c"}), LabelError);
    EXPECT_THROW(validate(DmPair{"b", ""}), LabelError);
}

TEST(Triple, ParseTriple) {
    EXPECT_EQ(parse_triple("Summarization ; Gigaword ; ROUGE-2"), (TdmTriple{"Summarization", "Gigaword", "ROUGE-2"}));
    EXPECT_THROW(parse_triple("a;b"), LabelError);
    EXPECT_THROW(parse_triple("a;;c"), LabelError);
}

TEST(Aliases, PaperExamplesNormalizeToF1) {
    const auto& aliases = AliasTable::builtin();
    EXPECT_EQ(normalize_label("F-score", LabelField::metric, aliases), "F1");
    EXPECT_EQ(normalize_label("Fscore", LabelField::metric, aliases), "F1");
    EXPECT_EQ(normalize_label("F1", LabelField::metric, aliases), "F1");
    EXPECT_EQ(normalize_label("  f-SCORE ", LabelField::metric, aliases), "F1");
}

TEST(Aliases, NormalizationIsIdempotent) {
    const auto aliases = AliasTable::builtin();
    for (const char* s : {"F-score", "Rg-2", "PTB", "NER", "Penn Treebank", "something else", "CNN/DM"}) {
        for (auto f : {LabelField::task, LabelField::dataset, LabelField::metric}) {
            const auto once = aliases.normalize(s, f);
            EXPECT_EQ(aliases.normalize(once, f), once) << s;
        }
    }
}

TEST(Aliases, FieldsAreIndependent) {
    const auto aliases = AliasTable::builtin();
    EXPECT_EQ(aliases.normalize("PTB", LabelField::dataset), "Penn Treebank");
    EXPECT_EQ(aliases.normalize("PTB", LabelField::metric), "PTB");
}

TEST(Aliases, FixpointViolationsAreRejected) {
    AliasTable t;
    t.add(LabelField::metric, "F-score", "F1");
    // a canonical label cannot itself become an alias
    EXPECT_THROW(t.add(LabelField::metric, "F1", "Accuracy"), LabelError);
    // a surface cannot map to two canonicals
    EXPECT_THROW(t.add(LabelField::metric, "F-score", "Accuracy"), LabelError);
    // an alias cannot be used as a canonical
    EXPECT_THROW(t.add(LabelField::metric, "Fmeasure", "F-score"), LabelError);
}

TEST(Aliases, BuiltinMatchesShippedDataFile) {
    const auto shipped = AliasTable::load_tsv(io::read_file(TDMS_DATA_DIR "/aliases.tsv"));
    EXPECT_EQ(AliasTable::builtin().to_tsv(), shipped.to_tsv());
    EXPECT_GT(shipped.size(), 10u);
}

TEST(Aliases, TsvRoundTrip) {
    const auto t = AliasTable::builtin();
    EXPECT_EQ(AliasTable::load_tsv(t.to_tsv()).to_tsv(), t.to_tsv());
    EXPECT_THROW(AliasTable::load_tsv("metric\tonly-two\n"), FormatError);
    EXPECT_THROW(AliasTable::load_tsv("colour\ta\tb\n"), FormatError);
}

TEST(Aliases, CanonicalizeTokensLongestMatch) {
    const auto t = AliasTable::builtin();
    EXPECT_EQ(t.canonicalize_tokens(text::word_tokens("we report Rg-2 on PTB")),
              text::word_tokens("we report ROUGE-2 on Penn Treebank"));
    EXPECT_EQ(t.canonicalize_tokens(text::word_tokens("the F1 score is high")),
              text::word_tokens("the F1 is high"));
}

TEST(FilterLowSupport, ThresholdSemantics) {
    TdmTriple shared{"T", "D", "M"};
    std::vector<GoldAnnotation> a = {paper("p1", {shared}), paper("p2", {shared}), paper("p3", {shared})};
    auto f = filter_low_support(a, 5);
    EXPECT_TRUE(f.label_space.empty());
    for (const auto& g : f.annotations) {
        EXPECT_TRUE(g.unknown_flag);
        EXPECT_TRUE(g.triples.empty());
    }
}

TEST(FilterLowSupport, MinOneIsIdentity) {
    std::vector<GoldAnnotation> a = {paper("p1", {{"A", "B", "C"}}), paper("p2", {{"X", "Y", "Z"}, {"A", "B", "C"}}),
                                     paper("p3", {})};
    auto f = filter_low_support(a, 1);
    EXPECT_EQ(f.annotations, a);
    EXPECT_EQ(f.label_space.size(), 2u);
    EXPECT_THROW(filter_low_support(a, 0), InvalidArgument);
}

TEST(FilterLowSupport, SurvivorsHaveEnoughSupport) {
    std::vector<GoldAnnotation> a;
    for (int i = 0; i < 12; ++i) {
        std::vector<TdmTriple> ts{{"T" + std::to_string(i % 3), "D", "M"}};
        if (i < 2) ts.push_back({"Rare", "D", "M"});
        a.push_back(paper("p" + std::to_string(i), ts));
    }
    auto f = filter_low_support(a, 4);
    EXPECT_EQ(f.label_space.size(), 3u);
    for (const auto& t : f.label_space) {
        std::size_t n = 0;
        for (const auto& g : f.annotations)
            for (const auto& st : g.triples) n += st.triple == t;
        EXPECT_GE(n, 4u);
    }
}

TEST(AnnotationsTsv, ParseAndRoundTrip) {
    const std::string tsv =
        "doc_id\ttask\tdataset\tmetric\tscore\n"
        "p1\tSummarization\tGigaword\tROUGE-2\t17.65\n"
        "p1\tSummarization\tGigaword\tROUGE-1\t-\n"
        "p2\tUnknown\t-\t-\t-\n"
        "p3\tNER\tCoNLL 2003\tF1\t91.2%\n";
    auto a = parse_annotations_tsv(tsv);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0].triples.size(), 2u);
    ASSERT_TRUE(a[0].triples[0].score);
    EXPECT_EQ(a[0].triples[0].score->value.to_string(), "17.65");
    EXPECT_FALSE(a[0].triples[1].score);
    EXPECT_TRUE(a[1].unknown_flag);
    EXPECT_TRUE(a[1].triples.empty());
    EXPECT_TRUE(a[2].triples[0].score->percent_flag);
    EXPECT_EQ(parse_annotations_tsv(annotations_to_tsv(a)), a);
}

TEST(AnnotationsTsv, Errors) {
    EXPECT_THROW(parse_annotations_tsv("p1\tT\tD\n"), FormatError);
    EXPECT_THROW(parse_annotations_tsv("p1\tUnknown\t-\t-\t-\np1\tT\tD\tM\t-\n"), FormatError);
    EXPECT_THROW(parse_annotations_tsv("p1\tT\tD\tM\tabc\n"), FormatError);
}

TEST(AnnotationsTsv, UnknownFlagIffNoTriples) {
    auto a = parse_annotations_tsv("p1\tT\tD\tM\t1\np2\tUnknown\t-\t-\t-\n");
    for (const auto& g : a) EXPECT_EQ(g.unknown_flag, g.triples.empty());
}

TEST(PublishedAnnotations, IbmStyleLines) {
    const std::string text =
        "paper1.pdf\tSummarization#Gigaword#ROUGE-2#17.65$Summarization#DUC 2004#ROUGE-1#29.1\n"
        "paper2.pdf\tunknow\n";
    auto a = parse_published_annotations(text);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].doc_id, "paper1");
    EXPECT_EQ(a[0].triples.size(), 2u);
    EXPECT_EQ(a[0].triples[1].triple.dataset, "DUC 2004");
    EXPECT_TRUE(a[1].unknown_flag);
    EXPECT_THROW(parse_published_annotations("p\tjust-text\n"), FormatError);
}

TEST(NormalizeAnnotations, MergesAliasedDuplicates) {
    std::vector<GoldAnnotation> a = {paper("p", {{"NER", "CoNLL 2003", "F-score"}, {"Named entity recognition", "CoNLL 2003", "F1"}})};
    auto n = normalize_annotations(a, AliasTable::builtin());
    ASSERT_EQ(n[0].triples.size(), 1u);
    EXPECT_EQ(n[0].triples[0].triple, (TdmTriple{"Named entity recognition", "CoNLL 2003", "F1"}));
}

TEST(LabelSpace, RestrictedToDocs) {
    std::vector<GoldAnnotation> a = {paper("p1", {{"A", "B", "C"}}), paper("p2", {{"X", "Y", "Z"}})};
    EXPECT_EQ(label_space_of(a).size(), 2u);
    EXPECT_EQ(label_space_of(a, {"p2"}), (LabelSpace{{"X", "Y", "Z"}}));
    EXPECT_THROW(index_by_doc({paper("p", {}), paper("p", {})}), FormatError);
}
