#include <gtest/gtest.h>

#include <random>

#include "tdms/error.hpp"
#include "tdms/table.hpp"

using namespace tdms;

namespace {

TableAnnotation table(std::string caption, std::vector<TableCellAnnotation> cells = {}) {
    return {"", std::move(caption), std::move(cells)};
}

TablePaperAnnotation random_paper(std::mt19937_64& rng, std::string id) {
    static const std::vector<std::string> words = {"Results", "Test", "NER", "F1", "Dev", "Ours", "Baseline"};
    TablePaperAnnotation p{std::move(id), {}};
    const auto n_tables = rng() % 4;
    for (std::size_t t = 0; t < n_tables; ++t) {
        TableAnnotation ta{"t" + std::to_string(t), words[rng() % words.size()], {}};
        const auto n_cells = rng() % 6;
        for (std::size_t c = 0; c < n_cells; ++c) {
            TableCellAnnotation cell;
            cell.value = std::to_string(rng() % 100) + "." + std::to_string(rng() % 10);
            cell.bold = rng() % 2;
            cell.row_label = words[rng() % words.size()];
            for (std::size_t h = 0; h < rng() % 3; ++h) cell.column_labels.push_back(words[rng() % words.size()]);
            ta.cells.push_back(cell);
        }
        p.tables.push_back(ta);
    }
    return p;
}

}  // namespace

TEST(TableEval, IdentityGivesHundredOnEveryDimension) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TablePaperAnnotation> papers;
        for (int i = 0; i < 4; ++i) papers.push_back(random_paper(rng, "p" + std::to_string(i)));
        auto report = evaluate_table_parser(papers, papers);
        for (auto d : kTableDimensions) {
            EXPECT_DOUBLE_EQ(report[d].precision, 100.0);
            EXPECT_DOUBLE_EQ(report[d].recall, 100.0);
            EXPECT_DOUBLE_EQ(report[d].f1, 100.0);
        }
    }
}

TEST(TableEval, MacroPrecisionHandArithmetic) {
    // paper 1: TP=2 FP=1 FN=0; paper 2: TP=1 FP=1 FN=1 (caption dimension)
    std::vector<TablePaperAnnotation> extracted = {{"p1", {table("A"), table("B"), table("C")}},
                                                   {"p2", {table("A"), table("X")}}};
    std::vector<TablePaperAnnotation> gold = {{"p1", {table("A"), table("B")}}, {"p2", {table("A"), table("Y")}}};
    auto report = evaluate_table_parser(extracted, gold);
    const auto& cap = report[TableDimension::caption];
    EXPECT_NEAR(cap.precision, (200.0 / 3.0 + 50.0) / 2.0, 1e-9);
    EXPECT_EQ(format_1dp(cap.precision), "58.3");
    EXPECT_NEAR(cap.recall, (100.0 + 50.0) / 2.0, 1e-9);
    EXPECT_NEAR(cap.f1, (80.0 + 50.0) / 2.0, 1e-9);
}

TEST(TableEval, ComparisonNormalizesWhitespaceCaseAndTrailingZeros) {
    TableCellAnnotation a{"85.60", true, "Joint", {"Test", "NER"}};
    TableCellAnnotation b{"85.6", true, " joint ", {"TEST", "ner"}};
    std::vector<TablePaperAnnotation> x = {{"p", {table("Results  on ACE", {a})}}};
    std::vector<TablePaperAnnotation> y = {{"p", {table("results on ace", {b})}}};
    auto report = evaluate_table_parser(x, y);
    for (auto d : kTableDimensions) EXPECT_DOUBLE_EQ(report[d].f1, 100.0);
}

TEST(TableEval, DimensionsDisagreeIndependently) {
    TableCellAnnotation a{"1.0", true, "r", {"c"}};
    TableCellAnnotation b{"1.0", false, "r", {"c"}};
    auto report = evaluate_table_parser({{"p", {table("T", {a})}}}, {{"p", {table("T", {b})}}});
    EXPECT_DOUBLE_EQ(report[TableDimension::caption].f1, 100.0);
    EXPECT_DOUBLE_EQ(report[TableDimension::value_row_caption].f1, 100.0);
    EXPECT_DOUBLE_EQ(report[TableDimension::value_column_caption].f1, 100.0);
    EXPECT_DOUBLE_EQ(report[TableDimension::value_bold_caption].f1, 0.0);
    EXPECT_DOUBLE_EQ(report[TableDimension::value_bold_row_column_caption].f1, 0.0);
}

TEST(TableEval, DocIdMismatchIsAnError) {
    EXPECT_THROW(evaluate_table_parser({{"a", {}}}, {{"b", {}}}), MismatchError);
    EXPECT_THROW(evaluate_table_parser({{"a", {}}, {"a", {}}}, {{"a", {}}}), MismatchError);
}

TEST(TableEval, ReportUsesTableOneRowNames) {
    std::vector<TablePaperAnnotation> x = {{"p", {table("T")}}};
    const auto text = render_table_eval(evaluate_table_parser(x, x));
    EXPECT_NE(text.find("Table caption"), std::string::npos);
    EXPECT_NE(text.find("Numeric value + IsBolded + Table caption"), std::string::npos);
    EXPECT_NE(text.find("100.0"), std::string::npos);
}

TEST(TableEval, AnnotationJsonRoundTrip) {
    std::mt19937_64 rng(9);
    auto p = random_paper(rng, "p7");
    auto back = table_annotation_from_json(to_json(p));
    EXPECT_EQ(back.doc_id, p.doc_id);
    ASSERT_EQ(back.tables.size(), p.tables.size());
    auto report = evaluate_table_parser({back}, {p});
    for (auto d : kTableDimensions) EXPECT_DOUBLE_EQ(report[d].f1, 100.0);
}

TEST(TableEval, GoldValuesMayBeJsonNumbers) {
    auto p = table_annotation_from_json(
        R"({"doc_id":"d","tables":[{"caption":"C","cells":[{"value":85.6,"bold":true,"row_label":"r","column_labels":["a"]}]}]})");
    ASSERT_EQ(p.tables.at(0).cells.size(), 1u);
    EXPECT_EQ(p.tables[0].cells[0].value, "85.6");
    EXPECT_THROW(table_annotation_from_json("{"), ParseError);
}

TEST(TableEval, ExtractedTablesConvertToAnnotationSchema) {
    TableStruct t;
    t.table_id = "tab_0";
    t.caption = "Results";
    t.grid = {{Cell{"Model", false, 0, 0}, Cell{"F1", false, 0, 1}}, {Cell{"Ours", false, 1, 0}, Cell{"91.20", true, 1, 1}}};
    t = associate_headers(t);
    auto ann = to_annotation("d", {t});
    ASSERT_EQ(ann.tables.size(), 1u);
    ASSERT_EQ(ann.tables[0].cells.size(), 1u);
    EXPECT_EQ(ann.tables[0].cells[0].value, "91.20");
    EXPECT_TRUE(ann.tables[0].cells[0].bold);
    EXPECT_EQ(ann.tables[0].cells[0].row_label, "Ours");
    EXPECT_EQ(ann.tables[0].cells[0].column_labels, std::vector<std::string>{"F1"});
}
