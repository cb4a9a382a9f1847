#pragma once

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uplr/types.hpp"

namespace uplr {

namespace detail {

inline std::string mm_format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.16e", v);  // 17 significant digits: exact round trip
  return buf;
}

inline bool mm_parse_double(const std::string& tok, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (const std::exception&) {
    return false;
  }
}

[[noreturn]] inline void mm_fail(const std::string& path, int line, const std::string& what) {
  throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Write a dense complex matrix in Matrix Market array format (column-major
/// value pairs, full precision). Extra metadata lines are emitted as comments
/// after the header. The write is atomic: a temporary sibling file is renamed
/// into place, so readers never observe a partial file.
inline void write_matrix_market(const std::string& path, const ComplexMatrix& A,
                                const std::vector<std::string>& comments = {}) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << "%%MatrixMarket matrix array complex general\n";
    for (const std::string& c : comments) out << "% " << c << "\n";
    out << A.rows() << " " << A.cols() << "\n";
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      for (Eigen::Index i = 0; i < A.rows(); ++i)
        out << detail::mm_format_double(A(i, j).real()) << " "
            << detail::mm_format_double(A(i, j).imag()) << "\n";
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + target.string() + "': " +
                        ec.message());
}

/// Read a Matrix Market file as a dense complex matrix. Accepts array and
/// coordinate formats with real or complex values ("general" symmetry only);
/// coordinate files are densified, with duplicate entries summed. Pattern and
/// integer fields, and symmetric/hermitian/skew-symmetric storage, are
/// rejected. Parse errors report the offending line number.
inline ComplexMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) detail::mm_fail(path, 1, "empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  for (auto* s : {&object, &format, &field, &symmetry})
    for (char& ch : *s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (banner != "%%MatrixMarket") detail::mm_fail(path, lineno, "missing %%MatrixMarket banner");
  if (object != "matrix") detail::mm_fail(path, lineno, "unsupported object '" + object + "'");
  if (format != "array" && format != "coordinate")
    detail::mm_fail(path, lineno, "unsupported format '" + format + "'");
  if (field != "real" && field != "complex")
    detail::mm_fail(path, lineno, "unsupported field '" + field + "' (need real or complex)");
  if (symmetry != "general")
    detail::mm_fail(path, lineno, "unsupported symmetry '" + symmetry + "' (need general)");
  const bool coordinate = format == "coordinate";
  const bool complexField = field == "complex";

  auto next_data_line = [&](std::vector<std::string>& tokens) {
    tokens.clear();
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;  // blank
      if (line[start] == '%') continue;          // comment / metadata
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      return true;
    }
    return false;
  };

  std::vector<std::string> tok;
  if (!next_data_line(tok)) detail::mm_fail(path, lineno, "missing size line");
  const std::size_t sizeTokens = coordinate ? 3u : 2u;
  if (tok.size() != sizeTokens) detail::mm_fail(path, lineno, "malformed size line");
  long rows = 0, cols = 0, nnz = 0;
  try {
    rows = std::stol(tok[0]);
    cols = std::stol(tok[1]);
    if (coordinate) nnz = std::stol(tok[2]);
  } catch (const std::exception&) {
    detail::mm_fail(path, lineno, "malformed size line");
  }
  if (rows < 0 || cols < 0 || nnz < 0) detail::mm_fail(path, lineno, "negative dimension");

  ComplexMatrix A = ComplexMatrix::Zero(rows, cols);
  const std::size_t valueTokens = complexField ? 2u : 1u;
  if (coordinate) {
    for (long e = 0; e < nnz; ++e) {
      if (!next_data_line(tok)) detail::mm_fail(path, lineno, "unexpected end of file: expected " +
                                                                  std::to_string(nnz) +
                                                                  " entries, got " +
                                                                  std::to_string(e));
      if (tok.size() != 2 + valueTokens) detail::mm_fail(path, lineno, "malformed entry line");
      long i = 0, j = 0;
      try {
        i = std::stol(tok[0]);
        j = std::stol(tok[1]);
      } catch (const std::exception&) {
        detail::mm_fail(path, lineno, "malformed entry indices");
      }
      if (i < 1 || i > rows || j < 1 || j > cols)
        detail::mm_fail(path, lineno, "entry index out of range");
      double re = 0, im = 0;
      if (!detail::mm_parse_double(tok[2], re) ||
          (complexField && !detail::mm_parse_double(tok[3], im)))
        detail::mm_fail(path, lineno, "malformed numeric value");
      A(i - 1, j - 1) += Complex(re, im);
    }
  } else {
    for (long j = 0; j < cols; ++j)
      for (long i = 0; i < rows; ++i) {
        if (!next_data_line(tok))
          detail::mm_fail(path, lineno, "unexpected end of file in array data");
        if (tok.size() != valueTokens) detail::mm_fail(path, lineno, "malformed value line");
        double re = 0, im = 0;
        if (!detail::mm_parse_double(tok[0], re) ||
            (complexField && !detail::mm_parse_double(tok[1], im)))
          detail::mm_fail(path, lineno, "malformed numeric value");
        A(i, j) = Complex(re, im);
      }
  }
  if (next_data_line(tok)) detail::mm_fail(path, lineno, "trailing data after matrix entries");
  return A;
}

}  // namespace uplr
