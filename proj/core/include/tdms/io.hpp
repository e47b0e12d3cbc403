#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace tdms::io {

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tdms::io
