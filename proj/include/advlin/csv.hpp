#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace advlin {

/// Decimal rendering with 17 significant digits (round-trips any double).
std::string format_real(double v);

/// Write via a temp file in the same directory, then rename over the target.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content);

std::string read_text(const std::filesystem::path& path);

/// Minimal CSV reader: first non-comment line is the header, '#' lines are
/// comments, fields never contain commas (true of every format we emit).
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_fields(const std::string& line);

}  // namespace advlin
