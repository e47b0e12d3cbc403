#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdms::text {

/// Unicode canonical composition (NFC). Invalid UTF-8 sequences are replaced
/// with U+FFFD.
std::string nfc(std::string_view utf8);

/// Full Unicode case folding, returned as NFC UTF-8.
std::string fold_case(std::string_view utf8);

std::string trim(std::string_view s);

/// Trim and collapse every run of whitespace into one ASCII space.
std::string squash_whitespace(std::string_view s);

/// Whitespace-delimited tokens; the unit of every token budget in the pipeline.
std::vector<std::string> whitespace_tokens(std::string_view s);
std::size_t token_count(std::string_view s);

/// First `n` whitespace tokens re-joined with single spaces.
std::string first_tokens(std::string_view s, std::size_t n);

std::string join(std::span<const std::string> parts, std::string_view sep);

/// Split on a single delimiter character, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

/// Lower-cased word tokens for lexical matching. Splits on whitespace and on
/// the separators `/ , ; : ( ) [ ] { } " '`; strips trailing periods. Hyphens
/// and interior dots stay inside a token ("ROUGE-2" -> "rouge-2").
std::vector<std::string> word_tokens(std::string_view s);

/// True when `needle` occurs as a contiguous run inside `haystack`. An empty
/// needle never matches.
bool contains_sequence(std::span<const std::string> haystack,
                       std::span<const std::string> needle);

/// Replace tabs, carriage returns and newlines with spaces.
std::string flatten_line(std::string_view s);

}  // namespace tdms::text
