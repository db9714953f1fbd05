#pragma once

#include <string>
#include <vector>

namespace ddlab {

/// %.17g rendering: shortest form that round-trips a double.
std::string format_double(double v);

/// In-memory CSV: comma-delimited, LF endings, UTF-8, no quoting (the
/// writers in this project never emit commas inside fields).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or MissingColumn.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Writes header + rows; binary mode so line endings are LF everywhere.
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace ddlab
