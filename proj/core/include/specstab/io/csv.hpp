#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specstab::io {

// 17-significant-digit decimal rendering; round-trips IEEE doubles exactly.
std::string format_full(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 output: fields holding comma, quote, or newline are quoted with
// embedded quotes doubled.  DomainError when a row width differs from the
// header width.
std::string render_csv(const CsvTable& t);

// Inverse of render_csv; ConfigError with the line number on malformed input
// (unterminated quote, ragged row, empty header).
CsvTable parse_csv(const std::string& text);

// Writes content to a sibling temp file, then renames over path.  Parent
// directories are created when missing.  StateError on filesystem failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Whole-file read; ConfigError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace specstab::io
