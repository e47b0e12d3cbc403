#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/decimal.hpp"
#include "tdms/metrics.hpp"

namespace tdms {

/// One grid slot. `row`/`col` locate the cell that owns the slot: a spanning
/// cell is copied into every slot it covers and all copies point back at the
/// origin slot.
struct Cell {
    std::string text;
    bool is_bold = false;
    std::size_t row = 0;
    std::size_t col = 0;

    bool operator==(const Cell&) const = default;
};

struct NumericValue {
    Decimal value;
    bool percent_flag = false;

    bool operator==(const NumericValue&) const = default;
};

struct NumericCell {
    std::size_t row = 0;
    std::size_t col = 0;
    Decimal value;
    bool percent_flag = false;
    bool is_bold = false;
    std::vector<std::string> column_headers;
    std::string row_label;

    bool operator==(const NumericCell&) const = default;
};

struct TableStruct {
    std::string table_id;
    std::string caption;
    std::vector<std::vector<Cell>> grid;
    std::vector<NumericCell> numeric_cells;
    /// The source carried no typeface markup for this table at all.
    bool no_bold_info = false;

    std::size_t rows() const noexcept { return grid.size(); }
    std::size_t cols() const noexcept { return grid.empty() ? 0 : grid.front().size(); }
    const Cell& at(std::size_t r, std::size_t c) const { return grid.at(r).at(c); }

    bool operator==(const TableStruct&) const = default;
};

/// Table cell as it appears in markup, before grid layout.
struct RawCell {
    std::string text;
    bool is_bold = false;
    std::size_t colspan = 1;
    std::size_t rowspan = 1;
};

struct RawTable {
    std::string table_id;
    std::string caption;
    bool caption_present = true;
    bool has_typeface_info = true;
    std::vector<std::vector<RawCell>> rows;
};

/// Integers, decimals, a trailing `%`, and `x ± y` / `x +- y` / `x +/- y`
/// (the leading number is kept). Surrounding whitespace is ignored.
std::optional<NumericValue> detect_numeric(std::string_view cell_text);

/// First row in which at least half of the non-empty cells are numeric;
/// rows above it are header rows. Returns rows() when no row qualifies.
std::size_t body_start_row(const TableStruct& table);

/// Rebuilds `numeric_cells` from the grid: column headers are the non-numeric
/// texts above the cell in its column, restricted to header rows; the row
/// label is the nearest non-numeric text to the left in the same row.
TableStruct associate_headers(TableStruct table);

/// Lays out spans into a rectangular grid and associates headers. Returns
/// nullopt when the geometry cannot be laid out; `warning` says why.
std::optional<TableStruct> layout_table(const RawTable& raw, std::string& warning);

/// Layout plus the numeric filter: tables without numeric cells and tables
/// with broken geometry are dropped, with a note appended to `warnings`.
std::vector<TableStruct> finalize_tables(const std::vector<RawTable>& raw,
                                         std::vector<std::string>& warnings);

/// Extracts tables from TEI XML or the line-oriented document format.
enum class SourceFormat { tei, structured };
std::vector<TableStruct> extract_tables(std::string_view source, SourceFormat format,
                                        std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Table parser evaluation

struct TableCellAnnotation {
    std::string value;
    bool bold = false;
    std::string row_label;
    std::vector<std::string> column_labels;
};

struct TableAnnotation {
    std::string table_id;
    std::string caption;
    std::vector<TableCellAnnotation> cells;
};

struct TablePaperAnnotation {
    std::string doc_id;
    std::vector<TableAnnotation> tables;
};

enum class TableDimension {
    caption,
    value_bold_caption,
    value_row_caption,
    value_column_caption,
    value_bold_row_column_caption,
};
inline constexpr std::array<TableDimension, 5> kTableDimensions = {
    TableDimension::caption,
    TableDimension::value_bold_caption,
    TableDimension::value_row_caption,
    TableDimension::value_column_caption,
    TableDimension::value_bold_row_column_caption,
};
std::string_view dimension_label(TableDimension d);

struct TableEvalReport {
    std::array<PrfScores, 5> rows{};  // indexed like kTableDimensions

    const PrfScores& operator[](TableDimension d) const { return rows[static_cast<std::size_t>(d)]; }
};

TablePaperAnnotation to_annotation(std::string doc_id, const std::vector<TableStruct>& tables);

/// Macro P/R/F1 over papers, one row per dimension. Throws MismatchError when
/// the two sides do not cover the same doc_ids.
TableEvalReport evaluate_table_parser(const std::vector<TablePaperAnnotation>& extracted,
                                      const std::vector<TablePaperAnnotation>& gold);

std::string render_table_eval(const TableEvalReport& report);

std::string to_json(const TablePaperAnnotation& paper);
TablePaperAnnotation table_annotation_from_json(std::string_view json);

/// Extracted-table serialization: the annotation schema plus table_id, the
/// grid, cell coordinates and the no_bold_info flag.
std::string tables_to_json(std::string_view doc_id, const std::vector<TableStruct>& tables);
std::vector<TableStruct> tables_from_json(std::string_view json);

}  // namespace tdms
