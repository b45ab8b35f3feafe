#include "planorm/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "planorm/numeric.hpp"

namespace planorm {

namespace {

long long interval_gap(long long m) {
  // distance of [m, m+1] to 0, integer units
  return std::max<long long>(0, std::max(m, -(m + 1)));
}

long long doubled_gap(long long m) {
  // distance of [2m-1, 2m+3] to 0, half units
  return std::max<long long>(0, std::max(2 * m - 1, -(2 * m + 3)));
}

bool tentative(const PlaneSplit& split, std::span<const long long> m) {
  long long t2 = 0;
  for (int i = split.l; i < split.n; ++i) {
    long long t = interval_gap(m[i]);
    t2 += t * t;
  }
  return t2 >= 4ll * split.n;
}

std::vector<long long> parent_of(std::span<const long long> m) {
  std::vector<long long> p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = floor_div(m[i], 2);
  return p;
}

}  // namespace

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

std::vector<double> DyadicCube::corner() const {
  std::vector<double> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    c[i] = static_cast<double>(m[i]) * side();
  return c;
}

std::vector<double> DyadicCube::center() const {
  std::vector<double> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    c[i] = (static_cast<double>(m[i]) + 0.5) * side();
  return c;
}

double DyadicCube::diam() const {
  return side() * std::sqrt(static_cast<double>(m.size()));
}

long long DyadicCube::t2(const PlaneSplit& split) const {
  long long acc = 0;
  for (int i = split.l; i < split.n; ++i) {
    long long t = interval_gap(m[i]);
    acc += t * t;
  }
  return acc;
}

long long DyadicCube::u2(const PlaneSplit& split) const {
  long long acc = 0;
  for (int i = split.l; i < split.n; ++i) {
    long long u = doubled_gap(m[i]);
    acc += u * u;
  }
  return acc;
}

double DyadicCube::dist(const PlaneSplit& split) const {
  return side() * std::sqrt(static_cast<double>(t2(split)));
}

double DyadicCube::dist_doubled(const PlaneSplit& split) const {
  return 0.5 * side() * std::sqrt(static_cast<double>(u2(split)));
}

std::size_t WhitneyDecomposition::count_at(int level) const {
  return level_begin[level + 1] - level_begin[level];
}

bool WhitneyDecomposition::selected_at(int level,
                                       std::span<const long long> m) const {
  return find(level, m).has_value();
}

std::optional<std::size_t> WhitneyDecomposition::find(
    int level, std::span<const long long> m) const {
  if (level < 0 || level > j_max) return std::nullopt;
  std::vector<long long> key(m.begin(), m.end());
  auto it = index_[level].find(key);
  if (it == index_[level].end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> WhitneyDecomposition::cubes_at(
    std::span<const double> x) const {
  std::vector<std::size_t> out;
  const int n = split.n;
  std::vector<long long> cand_lo(n), cand_hi(n), m(n);
  for (int j = 0; j <= j_max; ++j) {
    if (count_at(j) == 0) continue;
    double h = std::ldexp(1.0, -j);
    bool empty = false;
    for (int i = 0; i < n; ++i) {
      double u = x[i] / h;
      cand_lo[i] = static_cast<long long>(std::floor(u - 1.5));
      cand_hi[i] = static_cast<long long>(std::floor(u + 0.5)) + 1;
      if (cand_hi[i] < cand_lo[i]) empty = true;
    }
    if (empty) continue;
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i)
      counts[i] = static_cast<int>(cand_hi[i] - cand_lo[i] + 1);
    for (IndexIter it(counts); !it.done(); it.next()) {
      for (int i = 0; i < n; ++i) m[i] = cand_lo[i] + it.idx()[i];
      auto idx = find(j, m);
      if (!idx) continue;
      bool inside = true;  // open concentric double
      for (int i = 0; i < n && inside; ++i) {
        double c = (static_cast<double>(m[i]) + 0.5) * h;
        if (!(std::abs(x[i] - c) < h)) inside = false;
      }
      if (inside) out.push_back(*idx);
    }
  }
  return out;
}

WhitneyDecomposition whitney_decompose(const PlaneSplit& split,
                                       std::span<const double> lo,
                                       std::span<const double> hi, int j_max) {
  split.validate();
  if (static_cast<int>(lo.size()) != split.n ||
      static_cast<int>(hi.size()) != split.n)
    throw std::invalid_argument("whitney_decompose: box dimension mismatch");
  if (j_max < 0 || j_max > 24)
    throw std::invalid_argument("whitney_decompose: j_max out of range");

  WhitneyDecomposition dec;
  dec.split = split;
  dec.lo.assign(lo.begin(), lo.end());
  dec.hi.assign(hi.begin(), hi.end());
  dec.j_max = j_max;
  dec.level_begin.assign(j_max + 2, 0);
  dec.index_.resize(j_max + 1);

  const int n = split.n;
  for (int j = 0; j <= j_max; ++j) {
    double h = std::ldexp(1.0, -j);
    std::vector<long long> mlo(n);
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i) {
      double a = lo[i] / h, b = hi[i] / h;
      if (std::abs(a - std::llround(a)) > 1e-9 ||
          std::abs(b - std::llround(b)) > 1e-9)
        throw std::invalid_argument(
            "whitney_decompose: box must be dyadically aligned through j_max");
      mlo[i] = std::llround(a);
      counts[i] = static_cast<int>(std::llround(b) - mlo[i]);
    }
    std::vector<long long> m(n);
    for (IndexIter it(counts); !it.done(); it.next()) {
      for (int i = 0; i < n; ++i) m[i] = mlo[i] + it.idx()[i];
      if (!tentative(split, m)) continue;
      auto par = parent_of(m);
      if (tentative(split, par)) {
        if (j == 0)
          throw std::invalid_argument(
              "whitney_decompose: box reaches scales coarser than level 0; "
              "enlarge j range or shrink the box");
        continue;
      }
      DyadicCube c;
      c.level = j;
      c.m = m;
      dec.index_[j].emplace(m, dec.cubes.size());
      dec.cubes.push_back(std::move(c));
    }
    dec.level_begin[j + 1] = dec.cubes.size();
  }
  return dec;
}

WhitneyDiagnostics verify_whitney(const WhitneyDecomposition& dec) {
  WhitneyDiagnostics d;
  const auto& split = dec.split;
  const int n = split.n;
  d.cube_count = dec.count();
  d.per_level.resize(dec.j_max + 1);
  for (int j = 0; j <= dec.j_max; ++j) d.per_level[j] = dec.count_at(j);

  // interiors disjoint: same-level duplicates are impossible by construction;
  // across levels a dyadic overlap means a strict ancestor is also selected
  d.disjoint = true;
  for (const auto& c : dec.cubes) {
    auto anc = c.m;
    for (int j = c.level - 1; j >= 0 && d.disjoint; --j) {
      anc = parent_of(anc);
      if (dec.selected_at(j, anc)) d.disjoint = false;
    }
    if (!d.disjoint) break;
  }

  // dist/diam over selected cubes, exact in integers; alongside it the
  // distance of the concentric double in units of the side
  bool first = true;
  for (const auto& c : dec.cubes) {
    double r = std::sqrt(static_cast<double>(c.t2(split)) / n);
    double r1 = 0.5 * std::sqrt(static_cast<double>(c.u2(split)));
    if (first || r < d.ratio_min) d.ratio_min = r;
    if (first || r > d.ratio_max) d.ratio_max = r;
    if (first || r1 < d.ratio1_min) d.ratio1_min = r1;
    if (first || r1 > d.ratio1_max) d.ratio1_max = r1;
    first = false;
  }

  // uncovered volume: a finest-level cell is covered iff it is tentative
  // (tentativeness is inherited, so its chain then holds one selected cube)
  {
    double h = std::ldexp(1.0, -dec.j_max);
    std::vector<long long> mlo(n);
    std::vector<int> counts(n);
    for (int i = 0; i < n; ++i) {
      mlo[i] = std::llround(dec.lo[i] / h);
      counts[i] = static_cast<int>(std::llround(dec.hi[i] / h) - mlo[i]);
    }
    std::vector<long long> m(n);
    std::size_t uncovered = 0;
    for (IndexIter it(counts); !it.done(); it.next()) {
      for (int i = 0; i < n; ++i) m[i] = mlo[i] + it.idx()[i];
      if (!tentative(split, m)) ++uncovered;
    }
    d.covering_defect =
        static_cast<double>(uncovered) * std::pow(h, static_cast<double>(n));

    // cells can only be missed inside dist < 3 sqrt(n) h: cylinder volume
    double R = 3.0 * std::sqrt(static_cast<double>(n)) * h;
    double perp = 0.0;
    int c = split.codim();
    if (c == 1)
      perp = 2.0 * R;
    else if (c == 2)
      perp = M_PI * R * R;
    else
      perp = 4.0 / 3.0 * M_PI * R * R * R;
    double par = 1.0;
    for (int i = 0; i < split.l; ++i) par *= dec.hi[i] - dec.lo[i];
    d.collar_bound = par * perp;
  }

  // touching cubes may differ by at most one level: scan every coarser level
  // through the <= 2 lattice cells per axis that can touch the fine cube
  d.max_adjacent_level_gap = 0;
  for (const auto& c : dec.cubes) {
    for (int j = 0; j < c.level; ++j) {
      long long S = 1ll << (c.level - j);
      std::vector<long long> klo(n), khi(n);
      for (int i = 0; i < n; ++i) {
        klo[i] = -floor_div(-c.m[i], S) - 1;  // ceil(m/S) - 1
        khi[i] = floor_div(c.m[i] + 1, S);
      }
      std::vector<int> counts(n);
      for (int i = 0; i < n; ++i)
        counts[i] = static_cast<int>(khi[i] - klo[i] + 1);
      std::vector<long long> k(n);
      bool found = false;
      for (IndexIter it(counts); !it.done() && !found; it.next()) {
        for (int i = 0; i < n; ++i) k[i] = klo[i] + it.idx()[i];
        if (dec.selected_at(j, k)) found = true;
      }
      if (found)
        d.max_adjacent_level_gap =
            std::max(d.max_adjacent_level_gap, c.level - j);
    }
  }

  d.pass = d.disjoint && d.covering_defect <= d.collar_bound + 1e-12 &&
           d.max_adjacent_level_gap <= 1 &&
           (dec.count() == 0 || (d.ratio_min >= 2.0 && d.ratio_max <= 8.0));
  return d;
}

long long canonical_interior_offset(int n) {
  long long c = 1;
  while (c * c < 4ll * n) ++c;
  return c;
}

std::size_t canonical_interior_cube(const WhitneyDecomposition& dec,
                                    int level) {
  std::vector<long long> m(dec.split.n, 0);
  m[dec.split.l] = canonical_interior_offset(dec.split.n);
  auto idx = dec.find(level, m);
  if (!idx)
    throw std::out_of_range(
        "canonical_interior_cube: not present at this level");
  return *idx;
}

namespace {

struct AxisJet {
  double phi, r1, r2;  // phi, phi'/phi, phi''/phi
};

bool axis_jet(double t, AxisJet& out) {
  double w = 1.0 - t * t;
  if (!(w > 1e-9)) return false;
  out.phi = std::exp(-1.0 / w);
  double s1 = -2.0 * t / (w * w);
  double s1p = -2.0 / (w * w) - 8.0 * t * t / (w * w * w);
  out.r1 = s1;
  out.r2 = s1 * s1 + s1p;
  return true;
}

double raw_bump(const DyadicCube& cube, std::span<const double> x) {
  double s = cube.side();
  double b = 1.0;
  for (std::size_t i = 0; i < cube.m.size(); ++i) {
    double c = (static_cast<double>(cube.m[i]) + 0.5) * s;
    double t = (x[i] - c) / s;
    double w = 1.0 - t * t;
    if (!(w > 1e-9)) return 0.0;
    b *= std::exp(-1.0 / w);
  }
  return b;
}

Jet2 raw_bump_jet(const DyadicCube& cube, std::span<const double> x) {
  const int n = static_cast<int>(cube.m.size());
  Jet2 jet;
  jet.grad.assign(n, 0.0);
  jet.hess.assign(static_cast<std::size_t>(n) * n, 0.0);
  double s = cube.side();
  std::vector<AxisJet> ax(n);
  double b = 1.0;
  for (int i = 0; i < n; ++i) {
    double c = (static_cast<double>(cube.m[i]) + 0.5) * s;
    if (!axis_jet((x[i] - c) / s, ax[i])) return jet;  // all zero
    b *= ax[i].phi;
  }
  jet.v = b;
  for (int i = 0; i < n; ++i) jet.grad[i] = b * ax[i].r1 / s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jet.hess[static_cast<std::size_t>(i) * n + j] =
          i == j ? b * ax[i].r2 / (s * s) : b * ax[i].r1 * ax[j].r1 / (s * s);
  return jet;
}

}  // namespace

PartitionOfUnity::PartitionOfUnity(
    std::shared_ptr<const WhitneyDecomposition> dec, int order)
    : dec_(std::move(dec)), order_(order) {
  if (!dec_) throw std::invalid_argument("PartitionOfUnity: null decomposition");
  if (order_ < 0 || order_ > 4)
    throw std::invalid_argument("PartitionOfUnity: order must lie in [0, 4]");
}

double PartitionOfUnity::bump(std::size_t cube, std::span<const double> x) const {
  return raw_bump(dec_->cubes[cube], x);
}

double PartitionOfUnity::bump_sum(std::span<const double> x) const {
  double s = 0.0;
  for (auto i : dec_->cubes_at(x)) s += raw_bump(dec_->cubes[i], x);
  return s;
}

double PartitionOfUnity::evaluate(std::size_t cube,
                                  std::span<const double> x) const {
  double b = raw_bump(dec_->cubes[cube], x);
  if (b == 0.0) return 0.0;
  return b / bump_sum(x);
}

double PartitionOfUnity::evaluate_sum(std::span<const double> x) const {
  auto at = dec_->cubes_at(x);
  double s = 0.0;
  for (auto i : at) s += raw_bump(dec_->cubes[i], x);
  if (s <= 0.0) return 0.0;
  double acc = 0.0;
  for (auto i : at) acc += raw_bump(dec_->cubes[i], x) / s;
  return acc;
}

std::size_t PartitionOfUnity::overlap_count(std::span<const double> x) const {
  std::size_t c = 0;
  for (auto i : dec_->cubes_at(x))
    if (raw_bump(dec_->cubes[i], x) > 0.0) ++c;
  return c;
}

Jet2 PartitionOfUnity::bump_jet(std::size_t cube,
                                std::span<const double> x) const {
  return raw_bump_jet(dec_->cubes[cube], x);
}

Jet2 PartitionOfUnity::jet2(std::size_t cube, std::span<const double> x) const {
  const int n = dec_->split.n;
  Jet2 B = raw_bump_jet(dec_->cubes[cube], x);
  Jet2 out;
  out.grad.assign(n, 0.0);
  out.hess.assign(static_cast<std::size_t>(n) * n, 0.0);
  auto at = dec_->cubes_at(x);
  Jet2 S;
  S.grad.assign(n, 0.0);
  S.hess.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (auto i : at) {
    Jet2 j = raw_bump_jet(dec_->cubes[i], x);
    S.v += j.v;
    for (int a = 0; a < n; ++a) S.grad[a] += j.grad[a];
    for (int a = 0; a < n * n; ++a) S.hess[a] += j.hess[a];
  }
  if (S.v <= 0.0) return out;  // outside every support
  out.v = B.v / S.v;
  for (int a = 0; a < n; ++a)
    out.grad[a] = (B.grad[a] - out.v * S.grad[a]) / S.v;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::size_t ab = static_cast<std::size_t>(a) * n + b;
      double v = (B.hess[ab] - out.v * S.hess[ab] - out.grad[a] * S.grad[b] -
                  out.grad[b] * S.grad[a]) /
                 S.v;
      out.hess[ab] = v;
      out.hess[static_cast<std::size_t>(b) * n + a] = v;
    }
  return out;
}

double PartitionOfUnity::derivative(std::size_t cube, std::span<const double> x,
                                    const MultiIndex& alpha) const {
  int ord = alpha.order();
  if (ord > 4)
    throw std::invalid_argument("PartitionOfUnity: derivative order above 4");
  if (ord <= 2) {
    Jet2 j = jet2(cube, x);
    if (ord == 0) return j.v;
    std::vector<int> axes;
    for (int i = 0; i < alpha.dim(); ++i)
      for (int rep = 0; rep < alpha.entries[i]; ++rep) axes.push_back(i);
    if (ord == 1) return j.grad[axes[0]];
    return j.hess[static_cast<std::size_t>(axes[0]) * alpha.dim() + axes[1]];
  }
  // peel one order off by a 4th-order central difference of the analytic jet
  int axis = 0;
  while (alpha.entries[axis] == 0) ++axis;
  MultiIndex rest = alpha;
  rest.entries[axis] -= 1;
  double delta = dec_->cubes[cube].side() / 64.0;
  std::vector<double> y(x.begin(), x.end());
  auto at = [&](double off) {
    y[axis] = x[axis] + off;
    return derivative(cube, y, rest);
  };
  return (at(-2 * delta) - 8 * at(-delta) + 8 * at(delta) - at(2 * delta)) /
         (12 * delta);
}

FieldExpr PartitionOfUnity::weight_expr(std::size_t cube) const {
  auto dec = dec_;
  char buf[64];
  std::snprintf(buf, sizeof buf, "rho[L%d #%zu]", dec->cubes[cube].level, cube);
  return FieldExpr{buf, [dec, cube](std::span<const double> x) {
                     double b = raw_bump(dec->cubes[cube], x);
                     if (b == 0.0) return 0.0;
                     double s = 0.0;
                     for (auto i : dec->cubes_at(x))
                       s += raw_bump(dec->cubes[i], x);
                     return b / s;
                   }};
}

PartitionOfUnity partition_of_unity(
    std::shared_ptr<const WhitneyDecomposition> dec, int order) {
  return PartitionOfUnity(std::move(dec), order);
}

GridBox local_box(const DyadicCube& cube, double factor, int cells_per_axis) {
  auto c = cube.center();
  double half = factor * cube.side();
  std::vector<double> lo(c.size()), hi(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    lo[i] = c[i] - half;
    hi[i] = c[i] + half;
  }
  return GridBox::cell_centered(std::move(lo), std::move(hi),
                                2.0 * half / cells_per_axis);
}

}  // namespace planorm
