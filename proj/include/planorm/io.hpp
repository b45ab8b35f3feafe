#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "planorm/whitney.hpp"

namespace planorm {

inline constexpr const char* kToolVersion = "0.3.0";

std::uint64_t fnv1a(std::string_view text);

// %.12g, the one float format used in emitted tables
std::string fmt_g(double v);

// RFC-4180-style CSV: fields quoted when they contain comma, quote, or
// newline; quotes doubled.  Comment lines ("# ...") precede the header row.
struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> columns);

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);  // size must match columns
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::string> rows_;
};

// gnuplot-compatible whitespace-separated table with a column-name comment
struct TableWriter {
  explicit TableWriter(std::vector<std::string> columns);

  void comment(const std::string& text);
  void row(const std::vector<double>& cells);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::string> rows_;
};

// standard header comments: tool version, config hash, resolution schedule,
// and the per-command schema tag
std::vector<std::string> header_lines(const std::string& schema,
                                      std::uint64_t config_hash,
                                      const std::vector<double>& resolutions);
void stamp_header(CsvWriter& w, const std::string& schema,
                  std::uint64_t config_hash,
                  const std::vector<double>& resolutions);
void stamp_header(TableWriter& w, const std::string& schema,
                  std::uint64_t config_hash,
                  const std::vector<double>& resolutions);

// 2-D Whitney family as an SVG picture: one square per cube, filled by
// level, the plane drawn as a line
std::string whitney_svg(const WhitneyDecomposition& dec);

void write_file(const std::string& path, const std::string& content);

}  // namespace planorm
