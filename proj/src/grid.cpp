#include "planorm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "planorm/numeric.hpp"

namespace planorm {

namespace {

std::string fmt_point(std::span<const double> x) {
  std::string out = "(";
  char buf[40];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", x[i]);
    if (i) out += ", ";
    out += buf;
  }
  out += ")";
  return out;
}

}  // namespace

GridBox GridBox::cell_centered(std::vector<double> lo, std::vector<double> hi,
                               double h) {
  GridBox b;
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  b.h.assign(b.lo.size(), h);
  b.align = Alignment::CellCentered;
  b.check();
  return b;
}

GridBox GridBox::node_centered(std::vector<double> lo, std::vector<double> hi,
                               double h) {
  GridBox b;
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  b.h.assign(b.lo.size(), h);
  b.align = Alignment::NodeCentered;
  b.check();
  return b;
}

GridBox GridBox::cube(int n, double half, double h, Alignment a) {
  GridBox b;
  b.lo.assign(n, -half);
  b.hi.assign(n, half);
  b.h.assign(n, h);
  b.align = a;
  b.check();
  return b;
}

void GridBox::check() const {
  if (lo.empty() || lo.size() != hi.size() || lo.size() != h.size())
    throw std::invalid_argument("GridBox: inconsistent extents");
  for (int i = 0; i < dim(); ++i) {
    if (!(h[i] > 0.0)) throw std::invalid_argument("GridBox: h must be > 0");
    if (!(hi[i] > lo[i]))
      throw std::invalid_argument("GridBox: hi must exceed lo");
    double cells = (hi[i] - lo[i]) / h[i];
    if (std::abs(cells - std::llround(cells)) > 1e-9 * std::max(1.0, cells))
      throw std::invalid_argument(
          "GridBox: extent is not an integer number of cells");
  }
}

std::vector<int> GridBox::counts() const {
  std::vector<int> n(dim());
  for (int i = 0; i < dim(); ++i) {
    auto cells = static_cast<int>(std::llround((hi[i] - lo[i]) / h[i]));
    n[i] = align == Alignment::CellCentered ? cells : cells + 1;
  }
  return n;
}

std::size_t GridBox::size() const {
  std::size_t t = 1;
  for (int c : counts()) t *= static_cast<std::size_t>(c);
  return t;
}

double GridBox::cell_volume() const {
  double v = 1.0;
  for (double hi_ : h) v *= hi_;
  return v;
}

double GridBox::coord(int axis, int k) const {
  return align == Alignment::CellCentered ? lo[axis] + (k + 0.5) * h[axis]
                                          : lo[axis] + k * h[axis];
}

std::vector<double> GridBox::point(std::span<const int> idx) const {
  std::vector<double> x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = coord(i, idx[i]);
  return x;
}

bool GridBox::plane_on_lattice(const PlaneSplit& split) const {
  if (split.n != dim()) return false;
  for (int i = split.l; i < split.n; ++i) {
    double steps = lo[i] / h[i];
    if (std::abs(steps - std::llround(steps)) > 1e-9) return false;
  }
  return true;
}

std::size_t GridFunction::flat(std::span<const int> idx) const {
  auto n = box.counts();
  std::size_t f = 0;
  for (int i = 0; i < box.dim(); ++i)
    f = f * static_cast<std::size_t>(n[i]) + static_cast<std::size_t>(idx[i]);
  return f;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction sample(const FieldExpr& expr, const GridBox& box) {
  box.check();
  GridFunction g;
  g.box = box;
  g.values.resize(box.size());
  g.provenance = expr.name;
  g.expr = std::make_shared<FieldExpr>(expr);
  IndexIter it(box.counts());
  std::size_t k = 0;
  for (; !it.done(); it.next(), ++k) {
    auto x = box.point(it.idx());
    double v = expr(x);
    if (!std::isfinite(v))
      throw std::domain_error("sample: " + expr.name + " non-finite at " +
                              fmt_point(x));
    g.values[k] = v;
  }
  return g;
}

double declare_inner_support(GridFunction& g, double rel_tol) {
  const auto& b = g.box;
  double outer = 0.0, global = 0.0;
  IndexIter it(b.counts());
  std::size_t k = 0;
  for (; !it.done(); it.next(), ++k) {
    double v = std::abs(g.values[k]);
    global = std::max(global, v);
    bool inside = true;
    for (int i = 0; i < b.dim(); ++i) {
      double margin = 0.25 * (b.hi[i] - b.lo[i]);
      double x = b.coord(i, it.idx()[i]);
      if (x < b.lo[i] + margin || x > b.hi[i] - margin) {
        inside = false;
        break;
      }
    }
    if (!inside) outer = std::max(outer, v);
  }
  double ratio = global > 0.0 ? outer / global : 0.0;
  if (ratio > rel_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "declare_inner_support: %s leaks outside the inner half "
                  "(ratio %.3g > %.3g)",
                  g.provenance.c_str(), ratio, rel_tol);
    throw std::domain_error(buf);
  }
  g.inner_supported = true;
  return ratio;
}

double integrate(const GridFunction& g) {
  if (g.box.align != Alignment::CellCentered)
    throw std::invalid_argument("integrate: cell-centered grids only");
  return pairwise_sum(g.values) * g.box.cell_volume();
}

double plain_lp_norm(const GridFunction& g, double p) {
  if (std::isinf(p)) return g.max_abs();
  if (!(p > 0.0)) throw std::invalid_argument("plain_lp_norm: p must be > 0");
  std::vector<double> terms(g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i)
    terms[i] = std::pow(std::abs(g.values[i]), p);
  return std::pow(pairwise_sum(terms) * g.box.cell_volume(), 1.0 / p);
}

NormReport weighted_lp_norm(const GridFunction& g, double p,
                            const WeightedLpOpts& opts) {
  if (g.box.align != Alignment::CellCentered)
    throw std::invalid_argument("weighted_lp_norm: cell-centered grids only");
  if (!g.box.plane_on_lattice(opts.split))
    throw std::invalid_argument(
        "weighted_lp_norm: plane must lie on the cell lattice");
  if (!(p > 0.0) || std::isinf(p))
    throw std::invalid_argument("weighted_lp_norm: finite p > 0 required");

  std::vector<double> terms;
  terms.reserve(g.values.size());
  IndexIter it(g.box.counts());
  std::size_t k = 0;
  for (; !it.done(); it.next(), ++k) {
    auto x = g.box.point(it.idx());
    auto dw = distance_weights(x, opts.split, opts.eps);
    if (!opts.full_domain && !dw.in_collar) continue;
    double v = g.values[k];
    if (opts.kappa) v *= opts.kappa(dw.d);
    double term = std::pow(std::abs(v), p);
    if (opts.exponent != 0.0) {
      double w = opts.use_delta ? dw.delta : dw.d;
      term *= std::pow(w, -opts.exponent);
    }
    if (opts.log_divisor) {
      double ld = std::abs(std::log(dw.d));
      if (ld < 1e-12) ld = 1e-12;  // lattice never puts d at exactly 1
      term /= std::pow(ld, p);
    }
    terms.push_back(term);
  }
  NormReport rep;
  rep.value = std::pow(pairwise_sum(terms) * g.box.cell_volume(), 1.0 / p);
  rep.method = opts.full_domain ? "weighted-lp(full)" : "weighted-lp(collar)";
  rep.p = p;
  rep.h = *std::max_element(g.box.h.begin(), g.box.h.end());
  char buf[120];
  std::snprintf(buf, sizeof buf, "weight %s^-%.6g%s", opts.use_delta ? "delta" : "d",
                opts.exponent, opts.log_divisor ? ", /|log d|^p" : "");
  rep.note = buf;
  if (opts.probe && g.expr) {
    GridBox fine = g.box;
    for (double& hv : fine.h) hv *= 0.5;
    GridFunction gf = sample(*g.expr, fine);
    WeightedLpOpts sub = opts;
    sub.probe = false;
    double refined = weighted_lp_norm(gf, p, sub).value;
    rep.cross_value = refined;
    double denom = std::max(std::abs(rep.value), 1e-300);
    rep.divergence_suspected = (refined - rep.value) / denom > 0.05;
  }
  return rep;
}

namespace {

struct StencilRow {
  int first;  // offset of the leftmost tap relative to the target sample
  double c[5];
};

// 4th-order first-derivative rows on 5 taps.
const StencilRow kEdge0{0, {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -0.25}};
const StencilRow kEdge1{-1, {-0.25, -5.0 / 6, 1.5, -0.5, 1.0 / 12}};
const StencilRow kCentral{-2, {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12}};
const StencilRow kEdgeM2{-3, {-1.0 / 12, 0.5, -1.5, 5.0 / 6, 0.25}};
const StencilRow kEdgeM1{-4, {0.25, -4.0 / 3, 3.0, -4.0, 25.0 / 12}};

const StencilRow& row_for(int k, int n) {
  if (k == 0) return kEdge0;
  if (k == 1) return kEdge1;
  if (k == n - 2) return kEdgeM2;
  if (k == n - 1) return kEdgeM1;
  return kCentral;
}

void diff_axis(std::vector<double>& values, const std::vector<int>& counts,
               int axis, double h) {
  int n = counts[axis];
  std::size_t stride = 1;
  for (std::size_t i = axis + 1; i < counts.size(); ++i)
    stride *= static_cast<std::size_t>(counts[i]);

  std::vector<double> line(n), out(n);
  // Enumerate line base offsets: all index combinations with this axis at 0.
  std::vector<int> other;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (static_cast<int>(i) != axis) other.push_back(counts[i]);
  if (other.empty()) other.push_back(1);
  for (IndexIter it(other); !it.done(); it.next()) {
    std::size_t base = 0;
    int oi = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      int id = static_cast<int>(i) == axis ? 0 : it.idx()[oi++];
      base = base * static_cast<std::size_t>(counts[i]) +
             static_cast<std::size_t>(id);
    }
    for (int k = 0; k < n; ++k) line[k] = values[base + k * stride];
    for (int k = 0; k < n; ++k) {
      const auto& r = row_for(k, n);
      double acc = 0.0;
      for (int t = 0; t < 5; ++t) acc += r.c[t] * line[k + r.first + t];
      out[k] = acc / h;
    }
    for (int k = 0; k < n; ++k) values[base + k * stride] = out[k];
  }
}

}  // namespace

GridFunction derivative(const GridFunction& g, const MultiIndex& alpha) {
  if (alpha.dim() != g.box.dim())
    throw std::invalid_argument("derivative: index dimension mismatch");
  if (alpha.order() > 4)
    throw std::invalid_argument("derivative: order above 4 unsupported");
  auto counts = g.box.counts();
  for (int i = 0; i < g.box.dim(); ++i)
    if (alpha.entries[i] > 0 && counts[i] < 9)
      throw std::invalid_argument("derivative: need >= 9 samples per axis");

  GridFunction out = g;
  out.expr.reset();
  out.provenance = "D" + alpha.str() + " " + g.provenance;
  for (int i = 0; i < g.box.dim(); ++i)
    for (int rep = 0; rep < alpha.entries[i]; ++rep)
      diff_axis(out.values, counts, i, g.box.h[i]);
  return out;
}

RefinementProbe probe_refinement(const std::function<double(double)>& value_at_h,
                                 std::span<const double> hs) {
  RefinementProbe pr;
  pr.hs.assign(hs.begin(), hs.end());
  for (double h : hs) pr.values.push_back(value_at_h(h));
  for (std::size_t i = 1; i < pr.values.size(); ++i) {
    double denom = std::max(std::abs(pr.values[i - 1]), 1e-300);
    pr.rel_delta.push_back((pr.values[i] - pr.values[i - 1]) / denom);
  }
  auto m = pr.rel_delta.size();
  if (m >= 2)
    pr.divergent = pr.rel_delta[m - 1] > 0.05 && pr.rel_delta[m - 2] > 0.05 &&
                   pr.rel_delta[m - 1] >= pr.rel_delta[m - 2] / 1.5;
  if (m >= 1) pr.stable = std::abs(pr.rel_delta[m - 1]) < 0.05;
  return pr;
}

}  // namespace planorm
