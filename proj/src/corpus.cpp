#include "planorm/corpus.hpp"

#include <cmath>

namespace planorm {

namespace {

double soft(double v) { return v <= 0.0 ? 0.0 : std::exp(-1.0 / v); }

FieldExpr envelope(const char* id, double a) {
  return FieldExpr{id, [a](std::span<const double> x) {
                     double r2 = 0.0;
                     for (double c : x) r2 += c * c;
                     return std::exp(-a * r2);
                   }};
}

FieldExpr zk_envelope(const char* id, int k, double a) {
  return FieldExpr{id, [k, a](std::span<const double> x) {
                     double r2 = 0.0;
                     for (double c : x) r2 += c * c;
                     double v = std::exp(-a * r2);
                     for (int t = 0; t < k; ++t) v *= x[1];
                     return v;
                   }};
}

CorpusEntry entry(const char* id, FieldExpr e, int order, double half = 5.0) {
  CorpusEntry c;
  c.id = id;
  c.expr = std::move(e);
  c.vanish_order = order;
  c.half = half;
  return c;
}

}  // namespace

double plateau_profile(double t, double lo, double hi) {
  double u = (t - lo) / (hi - lo);
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  double a = soft(1.0 - u), b = soft(u);
  return a / (a + b);
}

GridFunction CorpusEntry::sample_node(double h) const {
  auto g = sample(expr, GridBox::cube(split.n, half, h, Alignment::NodeCentered));
  declare_inner_support(g);
  return g;
}

GridFunction CorpusEntry::sample_cell(double h) const {
  auto g = sample(expr, GridBox::cube(split.n, half, h));
  declare_inner_support(g);
  return g;
}

FieldExpr CorpusEntry::dilate(int k) const {
  double c = std::ldexp(1.0, k);
  FieldExpr base = expr;
  std::string nm = expr.name + "@" + std::to_string(k);
  return FieldExpr{nm, [base, c](std::span<const double> x) {
                     double buf[3];
                     for (std::size_t i = 0; i < x.size(); ++i) buf[i] = c * x[i];
                     return base(std::span<const double>(buf, x.size()));
                   }};
}

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> v;

    // boundary value nonzero
    v.push_back(entry("gaussian", envelope("gaussian", 2.0), 0));
    v.push_back(entry("gaussian-tight", envelope("gaussian-tight", 3.0), 0));
    // identically 1 near the plane, the strict-inclusion witness
    v.push_back(entry("plateau",
                      FieldExpr{"plateau",
                                [](std::span<const double> x) {
                                  return plateau_profile(std::abs(x[1]), 0.5, 1.0) *
                                         std::exp(-2.0 * x[0] * x[0]);
                                }},
                      0));

    // first normal derivative survives
    v.push_back(entry("odd", zk_envelope("odd", 1, 2.0), 1));
    v.push_back(entry("odd-tight", zk_envelope("odd-tight", 1, 3.0), 1));
    v.push_back(entry("sine",
                      FieldExpr{"sine",
                                [](std::span<const double> x) {
                                  double r2 = x[0] * x[0] + x[1] * x[1];
                                  return std::sin(x[1]) * std::exp(-2.0 * r2);
                                }},
                      1));
    v.push_back(entry("odd-wide",
                      FieldExpr{"odd-wide",
                                [](std::span<const double> x) {
                                  return x[1] * std::exp(-2.0 * x[0] * x[0] -
                                                         1.5 * x[1] * x[1]);
                                }},
                      1));

    // second order
    v.push_back(entry("square", zk_envelope("square", 2, 2.0), 2));
    v.push_back(entry("versine",
                      FieldExpr{"versine",
                                [](std::span<const double> x) {
                                  double r2 = x[0] * x[0] + x[1] * x[1];
                                  return (1.0 - std::cos(x[1])) *
                                         std::exp(-2.0 * r2);
                                }},
                      2));

    // third order
    v.push_back(entry("cubic", zk_envelope("cubic", 3, 2.0), 3));

    // compactly supported away from the plane; the profile soft(1 - (r/R)^2)
    // is smooth through the support edge, so no jump pollutes the norms
    v.push_back(entry("offplane",
                      FieldExpr{"offplane",
                                [](std::span<const double> x) {
                                  double y = x[0], z = x[1] - 0.75;
                                  double r2 = y * y + z * z;
                                  return soft(1.0 - r2 / 0.04);
                                }},
                      -1, 2.0));
    v.push_back(entry("offplane-shift",
                      FieldExpr{"offplane-shift",
                                [](std::span<const double> x) {
                                  double y = x[0] + 0.3, z = x[1] - 0.7;
                                  double r2 = y * y + z * z;
                                  return soft(1.0 - r2 / 0.0625);
                                }},
                      -1, 2.0));
    return v;
  }();
  return corpus;
}

}  // namespace planorm
