#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pbtbench::util {

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Appends one line (a trailing '\n' is added) and flushes.
void append_line(const std::filesystem::path& path, std::string_view line);

/// Hex digest of FNV-1a over `data`; used for content-addressed directory names.
std::string content_digest(std::string_view data);

}  // namespace pbtbench::util
