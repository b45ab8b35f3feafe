#include "planorm/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace planorm {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_field(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void CsvWriter::comment(const std::string& text) {
  comments_.push_back("# " + text);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count mismatch");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_field(cells[i]);
  }
  rows_.push_back(std::move(line));
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& c : comments_) out += c + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += csv_field(columns_[i]);
  }
  out += '\n';
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

TableWriter::TableWriter(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void TableWriter::comment(const std::string& text) {
  comments_.push_back("# " + text);
}

void TableWriter::row(const std::vector<double>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("TableWriter: cell count mismatch");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ' ';
    line += fmt_g(cells[i]);
  }
  rows_.push_back(std::move(line));
}

std::string TableWriter::str() const {
  std::string out;
  for (const auto& c : comments_) out += c + "\n";
  out += "#";
  for (const auto& c : columns_) out += " " + c;
  out += '\n';
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

std::vector<std::string> header_lines(const std::string& schema,
                                      std::uint64_t config_hash,
                                      const std::vector<double>& resolutions) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "config=%016llx",
                static_cast<unsigned long long>(config_hash));
  std::string res = "resolution=";
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (i) res += ' ';
    res += fmt_g(resolutions[i]);
  }
  return {std::string("planorm ") + kToolVersion + "; " + buf + "; " + res,
          "schema=" + schema};
}

void stamp_header(CsvWriter& w, const std::string& schema,
                  std::uint64_t config_hash,
                  const std::vector<double>& resolutions) {
  for (const auto& line : header_lines(schema, config_hash, resolutions))
    w.comment(line);
}

void stamp_header(TableWriter& w, const std::string& schema,
                  std::uint64_t config_hash,
                  const std::vector<double>& resolutions) {
  for (const auto& line : header_lines(schema, config_hash, resolutions))
    w.comment(line);
}

std::string whitney_svg(const WhitneyDecomposition& dec) {
  if (dec.split.n != 2)
    throw std::invalid_argument("whitney_svg: 2-D families only");
  const double pad = 0.05 * (dec.hi[0] - dec.lo[0]);
  const double x0 = dec.lo[0] - pad, y0 = dec.lo[1] - pad;
  const double w = dec.hi[0] - dec.lo[0] + 2 * pad;
  const double hgt = dec.hi[1] - dec.lo[1] + 2 * pad;
  static const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                  "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" "
                "viewBox=\"%.6g %.6g %.6g %.6g\" width=\"640\" "
                "height=\"640\">\n",
                x0, y0, w, hgt);
  out += buf;
  // flip y so the picture is not mirrored
  std::snprintf(buf, sizeof buf,
                "<g transform=\"translate(0 %.6g) scale(1 -1)\">\n",
                y0 + hgt + y0);
  out += buf;
  for (const auto& c : dec.cubes) {
    auto corner = c.corner();
    double side = c.side();
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.6g\" y=\"%.6g\" width=\"%.6g\" height=\"%.6g\" "
                  "fill=\"%s\" fill-opacity=\"0.6\" stroke=\"#222\" "
                  "stroke-width=\"%.6g\"/>\n",
                  corner[0], corner[1], side, side, palette[c.level % 8],
                  side * 0.02);
    out += buf;
  }
  if (dec.split.l == 1) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.6g\" y1=\"0\" x2=\"%.6g\" y2=\"0\" "
                  "stroke=\"#000\" stroke-width=\"%.6g\"/>\n",
                  dec.lo[0], dec.hi[0], 0.004 * w);
    out += buf;
  } else {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"0\" cy=\"0\" r=\"%.6g\" fill=\"#000\"/>\n",
                  0.006 * w);
    out += buf;
  }
  out += "</g>\n</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace planorm
