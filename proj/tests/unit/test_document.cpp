#include <gtest/gtest.h>

#include "synthetic.hpp"
#include "tdms/document.hpp"
#include "tdms/error.hpp"
#include "tdms/io.hpp"
#include "tdms/text.hpp"

using namespace tdms;

namespace {

std::vector<std::string> fixture_sentences() {
    std::vector<std::string> out;
    for (auto& line : text::split(io::read_file(TDMS_FIXTURE_DIR "/sentences.txt"), '\n'))
        if (!text::trim(line).empty()) out.push_back(text::trim(line));
    return out;
}

}  // namespace

TEST(SplitSentences, HandLabeledFixture) {
    const auto gold = fixture_sentences();
    ASSERT_EQ(gold.size(), 20u);
    std::string body;
    for (const auto& s : gold) body += (body.empty() ? "" : " ") + s;
    EXPECT_EQ(split_sentences(body), gold);
}

TEST(SplitSentences, EachFixtureSentenceStaysWhole) {
    for (const auto& s : fixture_sentences()) EXPECT_EQ(split_sentences(s), std::vector<std::string>{s}) << s;
}

TEST(SplitSentences, Basics) {
    EXPECT_EQ(split_sentences("First sentence here. Second one follows."),
              (std::vector<std::string>{"First sentence here.", "Second one follows."}));
    EXPECT_EQ(split_sentences("We evaluate on CoNLL (e.g., NER)."),
              std::vector<std::string>{"We evaluate on CoNLL (e.g., NER)."});
    EXPECT_TRUE(split_sentences("").empty());
    EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(SplitSentences, ConcatenationEqualsBodyModuloWhitespace) {
    const std::string body = "Alpha beta.  Gamma?\tDelta! \"Quoted.\" Fig. 2 shows it. 3 runs were done.";
    const auto parts = split_sentences(body);
    for (const auto& p : parts) EXPECT_FALSE(text::trim(p).empty());
    EXPECT_EQ(text::squash_whitespace(text::join(parts, " ")), text::squash_whitespace(body));
}

TEST(Structured, ParsesBlocks) {
    const std::string src =
        "#TITLE Neural Tagging\n#ABSTRACT\nWe tag things.\nWell.\n#SECTION Introduction\nIntro one. Intro two.\n"
        "#SECTION Experiments\nWe evaluate on the CoNLL dataset.\n#TABLE Results\nModel | F1\nOurs | **91.2**\n";
    auto doc = parse_structured(src, "d1");
    EXPECT_EQ(doc.doc_id, "d1");
    EXPECT_EQ(doc.title, "Neural Tagging");
    EXPECT_EQ(doc.abstract, "We tag things. Well.");
    ASSERT_EQ(doc.sections.size(), 2u);
    EXPECT_EQ(doc.sections[1].heading, "Experiments");
    EXPECT_EQ(doc.sections[0].sentences.size(), 2u);
    ASSERT_EQ(doc.tables.size(), 1u);
    EXPECT_EQ(doc.tables[0].caption, "Results");
    ASSERT_EQ(doc.tables[0].numeric_cells.size(), 1u);
    EXPECT_TRUE(doc.tables[0].numeric_cells[0].is_bold);
    EXPECT_TRUE(doc.warnings.empty());
}

TEST(Structured, DocIdDirectiveAndNfc) {
    auto doc = parse_structured("#DOCID abc\n#TITLE Cafe\xCC\x81\n#ABSTRACT\ntext\n");
    EXPECT_EQ(doc.doc_id, "abc");
    EXPECT_EQ(doc.title, "Caf\xC3\xA9");
}

TEST(Structured, MissingAbstractWarns) {
    auto doc = parse_structured("#TITLE T\n#SECTION S\nBody.\n", "d");
    EXPECT_EQ(doc.abstract, "");
    EXPECT_EQ(doc.warnings.size(), 1u);
}

TEST(Structured, EmptyInputIsDistinctError) {
    EXPECT_THROW(parse_structured("", "d"), EmptyDocumentError);
    EXPECT_THROW(parse_structured("\n\n", "d"), EmptyDocumentError);
    EXPECT_THROW(parse_structured("just text outside blocks\n", "d"), EmptyDocumentError);
}

TEST(CanonicalJson, FieldNamesAndRoundTrip) {
    auto doc = parse_structured("#TITLE T\n#ABSTRACT\nA.\n#SECTION H\nOne. Two.\n", "d9");
    const auto json = to_canonical_json(doc);
    EXPECT_NE(json.find("\"doc_id\""), std::string::npos);
    EXPECT_NE(json.find("\"sections\""), std::string::npos);
    EXPECT_NE(json.find("\"heading\""), std::string::npos);
    EXPECT_NE(json.find("\"body\""), std::string::npos);
    auto back = from_canonical_json(json);
    EXPECT_EQ(back.doc_id, doc.doc_id);
    EXPECT_EQ(back.title, doc.title);
    EXPECT_EQ(back.abstract, doc.abstract);
    EXPECT_EQ(back.sections, doc.sections);
}

TEST(CanonicalJson, MalformedJsonIsParseError) {
    EXPECT_THROW(from_canonical_json("{\"doc_id\": "), ParseError);
    EXPECT_THROW(from_canonical_json("{\"title\": \"x\"}"), FormatError);
}

TEST(LoadDocument, DispatchesOnExtension) {
    auto tei = load_document(TDMS_FIXTURE_DIR "/tei/two_sections.xml");
    EXPECT_EQ(tei.doc_id, "two_sections");
    EXPECT_EQ(tei.title, "X");
}

TEST(Builders, SyntheticDocumentParses) {
    fixtures::DocSpec spec{"s1", "Title", "Abstract here.", {{"Intro", "Body."}}, {}};
    auto doc = fixtures::build(spec);
    EXPECT_EQ(doc.doc_id, "s1");
    EXPECT_EQ(doc.sections.size(), 1u);
}
