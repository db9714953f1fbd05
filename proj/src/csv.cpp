#include "ddlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddlab/errors.hpp"

namespace ddlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw MissingColumn("CSV has no column \"" + name + "\"");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      table.header = split_line(line);
      first = false;
    } else if (!line.empty()) {
      table.rows.push_back(split_line(line));
    }
  }
  if (first) throw IoError("\"" + path + "\" is empty");
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  const auto put_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  put_row(table.header);
  for (const auto& row : table.rows) put_row(row);
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

}  // namespace ddlab
