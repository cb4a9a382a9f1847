#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uplr/types.hpp"

namespace uplr {

/// Minimal CSV table: '#'-prefixed metadata comment lines, one header row,
/// then numeric rows written at full precision. Content is deterministic (no
/// timestamps), so identical runs produce byte-identical files.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Atomic CSV write (temporary sibling file renamed into place).
inline void write_csv(const std::string& path, const CsvTable& table) {
  namespace fs = std::filesystem;
  for (const auto& row : table.rows)
    detail::require(row.size() == table.header.size(),
                    "write_csv: row width does not match header");
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    for (const std::string& c : table.comments) out << "# " << c << "\n";
    for (std::size_t j = 0; j < table.header.size(); ++j)
      out << (j ? "," : "") << table.header[j];
    out << "\n";
    char buf[64];
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.16e", row[j]);
        out << (j ? "," : "") << buf;
      }
      out << "\n";
    }
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + target.string() + "': " +
                        ec.message());
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CsvTable table;
  std::string line;
  int lineno = 0;
  bool sawHeader = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = s.find(',', start);
      std::string cell = s.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      out.push_back(cell);
      if (comma == std::string::npos) return out;
      start = comma + 1;
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.find_first_not_of(" \t", 1);
      table.comments.push_back(start == std::string::npos ? "" : line.substr(start));
      continue;
    }
    if (!sawHeader) {
      table.header = split(line);
      sawHeader = true;
      continue;
    }
    std::vector<std::string> cells = split(line);
    if (cells.size() != table.header.size())
      throw IoError(path + ":" + std::to_string(lineno) + ": row width does not match header");
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      try {
        std::size_t pos = 0;
        row[j] = std::stod(cells[j], &pos);
        if (pos != cells[j].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": malformed numeric cell '" +
                      cells[j] + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!sawHeader) throw IoError(path + ": missing header row");
  return table;
}

}  // namespace uplr
