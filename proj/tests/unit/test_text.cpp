#include <gtest/gtest.h>

#include "tdms/text.hpp"

using namespace tdms;

TEST(Text, NfcComposesDecomposedInput) {
    // "e" + combining acute accent -> precomposed U+00E9
    EXPECT_EQ(text::nfc("caf\x65\xCC\x81"), "caf\xC3\xA9");
    EXPECT_EQ(text::nfc("plain ascii"), "plain ascii");
}

TEST(Text, FoldCaseHandlesAsciiAndUnicode) {
    EXPECT_EQ(text::fold_case("ROUGE-2"), "rouge-2");
    EXPECT_EQ(text::fold_case("Stra\xC3\x9F" "e"), "strasse");
    EXPECT_EQ(text::fold_case("\xC3\x89" "valuation"), "\xC3\xA9" "valuation");
}

TEST(Text, TrimAndSquash) {
    EXPECT_EQ(text::trim("  a b \n"), "a b");
    EXPECT_EQ(text::trim(""), "");
    EXPECT_EQ(text::squash_whitespace(" a \t\n b  c "), "a b c");
}

TEST(Text, WhitespaceTokens) {
    EXPECT_EQ(text::whitespace_tokens("  one two\tthree\n"), (std::vector<std::string>{"one", "two", "three"}));
    EXPECT_EQ(text::token_count(""), 0u);
    EXPECT_EQ(text::token_count("a [SEP] b"), 3u);
    EXPECT_EQ(text::first_tokens("a  b   c d", 2), "a b");
    EXPECT_EQ(text::first_tokens("a b", 5), "a b");
}

TEST(Text, SplitKeepsEmptyFields) {
    EXPECT_EQ(text::split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
    EXPECT_EQ(text::split("", ','), (std::vector<std::string>{""}));
}

TEST(Text, JoinUsesSeparator) {
    std::vector<std::string> parts{"x", "y", "z"};
    EXPECT_EQ(text::join(parts, " ; "), "x ; y ; z");
    EXPECT_EQ(text::join(std::vector<std::string>{}, ","), "");
}

TEST(Text, WordTokensSplitOnPunctuationButKeepHyphens) {
    EXPECT_EQ(text::word_tokens("We report ROUGE-2 (Gigaword)."),
              (std::vector<std::string>{"we", "report", "rouge-2", "gigaword"}));
    EXPECT_EQ(text::word_tokens("F1/EM; acc: 9.5"), (std::vector<std::string>{"f1", "em", "acc", "9.5"}));
    EXPECT_EQ(text::word_tokens("\"quoted\" [x]"), (std::vector<std::string>{"quoted", "x"}));
}

TEST(Text, ContainsSequence) {
    std::vector<std::string> hay{"the", "penn", "treebank", "set"};
    std::vector<std::string> yes{"penn", "treebank"};
    std::vector<std::string> no{"treebank", "penn"};
    EXPECT_TRUE(text::contains_sequence(hay, yes));
    EXPECT_FALSE(text::contains_sequence(hay, no));
    EXPECT_FALSE(text::contains_sequence(hay, std::vector<std::string>{}));
}

TEST(Text, FlattenLine) { EXPECT_EQ(text::flatten_line("a\tb\r\nc"), "a b  c"); }
