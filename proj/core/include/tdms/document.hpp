#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tdms/table.hpp"

namespace tdms {

struct Section {
    std::string heading;
    std::string body;
    std::vector<std::string> sentences;

    bool operator==(const Section&) const = default;
};

struct RawDocument {
    std::string doc_id;
    std::string title;
    std::string abstract;
    std::vector<Section> sections;
    std::vector<TableStruct> tables;
    /// Non-fatal ingestion notes (missing abstract, skipped table, ...).
    std::vector<std::string> warnings;

    bool operator==(const RawDocument&) const = default;
};

/// Rule-based sentence splitter: terminal punctuation followed by whitespace
/// and an upper-case letter, digit, quote or opening bracket, unless the word
/// before the period is a known abbreviation ("e.g.", "Fig.", "et al.").
std::vector<std::string> split_sentences(std::string_view body);

/// Parses GROBID-style TEI XML. Tables under `<figure type="table">` are
/// extracted as well. Throws ParseError (with byte offset) on malformed XML
/// and EmptyDocumentError when no title, abstract or body text is present.
RawDocument parse_tei(std::string_view xml_bytes, std::string doc_id = {});

/// Parses the line-oriented format: `#TITLE`, `#ABSTRACT`, `#SECTION <heading>`
/// and `#TABLE <caption>` blocks, each followed by raw text lines. Table rows
/// are `|`-separated cells; `**x**` marks a bold cell and a `{cols=N}` prefix
/// a horizontal span. A `#NO_BOLD_INFO` line inside a table block declares that
/// typeface data is unavailable.
RawDocument parse_structured(std::string_view text, std::string doc_id = {});

/// Dispatches on file extension: `.xml` is TEI, anything else the line format.
/// doc_id defaults to the file name up to the first dot.
RawDocument load_document(const std::filesystem::path& path);

/// Canonical JSON: {doc_id, title, abstract, sections:[{heading, body}]}.
std::string to_canonical_json(const RawDocument& doc);
RawDocument from_canonical_json(std::string_view json);

}  // namespace tdms
