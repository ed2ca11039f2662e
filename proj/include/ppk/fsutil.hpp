#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ppk {

/// Reads a whole file as bytes. Throws ppk::Error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `bytes` to a sibling temp file and renames it over `path`, so readers
/// never observe a partially written output.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ppk
