#include "planorm/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "planorm/lp.hpp"
#include "planorm/numeric.hpp"

namespace planorm {

double Kappa::operator()(double t) const {
  switch (kind) {
    case Kind::One:
      return 1.0;
    case Kind::LogPower: {
      double u = t < 1.0 ? -std::log(t) : 0.0;
      return std::pow(u, delta);
    }
    case Kind::PowerNeg:
      return std::pow(t, -delta);
  }
  return 1.0;
}

std::string Kappa::label() const {
  char buf[48];
  switch (kind) {
    case Kind::One:
      return "1";
    case Kind::LogPower:
      std::snprintf(buf, sizeof buf, "log^%g", delta);
      return buf;
    case Kind::PowerNeg:
      std::snprintf(buf, sizeof buf, "t^-%g", delta);
      return buf;
  }
  return "1";
}

Kappa Kappa::one() { return Kappa{}; }

Kappa Kappa::log_power(double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("Kappa: log power needs delta > 0");
  return Kappa{Kind::LogPower, delta};
}

Kappa Kappa::power_neg(double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("Kappa: negative power needs delta > 0");
  return Kappa{Kind::PowerNeg, delta};
}

Kappa Kappa::parse(const std::string& text) {
  if (text == "1" || text == "one") return one();
  auto tail_number = [&](std::size_t at) {
    try {
      std::size_t used = 0;
      double v = std::stod(text.substr(at), &used);
      if (at + used != text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("Kappa: bad exponent in '" + text + "'");
    }
  };
  if (text.rfind("log^", 0) == 0) return log_power(tail_number(4));
  if (text.rfind("t^", 0) == 0) {
    double e = tail_number(2);
    if (!(e < 0.0))
      throw std::invalid_argument(
          "Kappa: power weight must decrease, exponent must be negative");
    return power_neg(-e);
  }
  throw std::invalid_argument("Kappa: cannot parse '" + text +
                              "' (want 1 | log^D | t^-D)");
}

void WeightSpec::validate(double eps) const {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("WeightSpec: collar width must lie in (0,1)");
  const int K = 256;
  double prev = 0.0;
  for (int k = 0; k < K; ++k) {
    double t = eps * (k + 1) / K;
    double v = kappa(t);
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("WeightSpec: kappa must be positive on (0,eps)");
    if (k > 0 && v > prev + 1e-12 * (1.0 + std::abs(prev)))
      throw std::invalid_argument("WeightSpec: kappa must be non-increasing");
    prev = v;
  }
}

double ShellLattice::spacing() const { return std::ldexp(1.0, -level); }

double ShellLattice::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < points[a].size(); ++i) {
        double t = points[a][i] - points[b][i];
        d2 += t * t;
      }
      best = std::min(best, std::sqrt(d2));
    }
  return best;
}

namespace {

// Perpendicular offsets in units of half the spacing: +-1 for codimension 1,
// the diagonal sign family for codimension 2 and 3.  All land in the shell
// band [1,2) half-units from the plane and keep full-spacing separation.
std::vector<std::vector<int>> perp_sign_family(int codim) {
  if (codim < 1 || codim > 3)
    throw std::invalid_argument("shell lattice: codimension must be 1, 2, or 3");
  std::vector<std::vector<int>> out;
  int m = 1 << codim;
  for (int mask = 0; mask < m; ++mask) {
    std::vector<int> v(codim);
    for (int b = 0; b < codim; ++b) v[b] = (mask >> b) & 1 ? 1 : -1;
    out.push_back(std::move(v));
  }
  return out;
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double t = a[i] - b[i];
    d2 += t * t;
  }
  return d2;
}

}  // namespace

ShellLattice shell_lattice(int level, const PlaneSplit& split) {
  split.validate();
  if (level < 1)
    throw std::invalid_argument("shell_lattice: level must be >= 1");
  ShellLattice lat;
  lat.split = split;
  lat.level = level;

  const double h = std::ldexp(1.0, -level);
  const long long K = 1LL << level;
  const int l = split.l;
  auto perp = perp_sign_family(split.codim());

  // parallel axis coordinates (k + 1/2) h, all strictly inside (-1, 1)
  std::vector<double> axis;
  for (long long k = -K; k < K; ++k) axis.push_back((k + 0.5) * h);

  std::vector<int> par_counts(l, static_cast<int>(axis.size()));
  if (l == 0) par_counts.push_back(1);
  for (IndexIter it(par_counts); !it.done(); it.next()) {
    std::vector<double> x(split.n, 0.0);
    double r2 = 0.0;
    for (int i = 0; i < l; ++i) {
      x[i] = axis[it.idx()[i]];
      r2 += x[i] * x[i];
    }
    if (r2 >= 1.0) continue;  // Euclidean parallel ball for l >= 2
    for (const auto& sgn : perp) {
      for (int i = l; i < split.n; ++i) x[i] = sgn[i - l] * 0.5 * h;
      lat.points.push_back(x);
    }
  }
  return lat;
}

double covering_radius_audit(const ShellLattice& lat, int samples,
                             unsigned long seed) {
  const auto& split = lat.split;
  const double h = lat.spacing();
  const int l = split.l, codim = split.codim();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(split.n, 0.0);
    if (l > 0) {
      double r2;
      do {
        r2 = 0.0;
        for (int i = 0; i < l; ++i) {
          x[i] = 2.0 * uniform01(rng) - 1.0;
          r2 += x[i] * x[i];
        }
      } while (r2 >= 1.0);
    }
    // perpendicular part: uniform direction, radius in [h/2, h)
    double radius = 0.5 * h * (1.0 + uniform01(rng));
    if (codim == 1) {
      x[l] = uniform01(rng) < 0.5 ? -radius : radius;
    } else {
      double n2;
      std::vector<double> dir(codim);
      do {
        n2 = 0.0;
        for (int i = 0; i < codim; ++i) {
          dir[i] = 2.0 * uniform01(rng) - 1.0;
          n2 += dir[i] * dir[i];
        }
      } while (n2 < 1e-12 || n2 > 1.0);
      double inv = radius / std::sqrt(n2);
      for (int i = 0; i < codim; ++i) x[l + i] = dir[i] * inv;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : lat.points) best = std::min(best, dist2(x, pt));
    worst = std::max(worst, std::sqrt(best));
  }
  return worst;
}

double witness_profile(double t) { return cutoff_high(t, 0.5, 1.0); }

double hardy_quotient_1d(const GridFunction& g, double p, double a) {
  if (g.box.dim() != 1 || g.box.align != Alignment::CellCentered ||
      std::abs(g.box.lo[0]) > 1e-12)
    throw std::invalid_argument(
        "hardy_quotient_1d: need a 1-D cell-centered grid starting at 0");
  if (!(p >= 1.0))
    throw std::invalid_argument("hardy_quotient_1d: p >= 1 required");
  if (!(p > a + 1.0))
    throw std::invalid_argument("hardy_quotient_1d: p > a + 1 required");

  auto dg = derivative(g, MultiIndex{{1}});
  const double h = g.box.h[0];
  std::vector<double> num(g.values.size()), den(g.values.size());
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    double t = g.box.coord(0, static_cast<int>(k));
    double ta = std::pow(t, a);
    num[k] = std::pow(std::abs(g.values[k]) / t, p) * ta;
    den[k] = std::pow(std::abs(dg.values[k]), p) * ta;
  }
  double bottom = pairwise_sum(den) * h;
  if (bottom <= 1e-14)
    throw std::domain_error(
        "hardy_quotient_1d: degenerate input, derivative energy vanishes");
  return pairwise_sum(num) * h / bottom;
}

GridFunction power_family_1d(double beta, double T, int N) {
  if (!(beta > 0.0))
    throw std::invalid_argument("power_family_1d: beta > 0 (trace must vanish)");
  if (!(T > 0.0) || N < 9)
    throw std::invalid_argument("power_family_1d: bad extent");
  char name[48];
  std::snprintf(name, sizeof name, "t^%g", beta);
  FieldExpr e{name, [beta](std::span<const double> x) {
                return std::pow(x[0], beta);
              }};
  return sample(e, GridBox::cell_centered({0.0}, {T}, T / N));
}

namespace {

// Sum of level-j bumps at x, enumerating only lattice points whose support
// can reach x.  Returns the bump count through `hits` when asked.
double level_bump_sum(int j, const PlaneSplit& split, std::span<const double> x,
                      int* hits) {
  const double h = std::ldexp(1.0, -j);
  const double scale = std::ldexp(1.0, j - 1);
  const double reach = 2.0 * h;  // support radius of one bump
  const long long K = 1LL << j;
  const int l = split.l;

  std::vector<std::vector<double>> axis_cand(std::max(l, 1));
  std::vector<int> counts;
  for (int i = 0; i < l; ++i) {
    auto& cand = axis_cand[i];
    auto kmin = static_cast<long long>(std::floor((x[i] - reach) / h - 0.5));
    auto kmax = static_cast<long long>(std::ceil((x[i] + reach) / h - 0.5));
    kmin = std::max(kmin, -K);
    kmax = std::min(kmax, K - 1);
    for (long long k = kmin; k <= kmax; ++k) cand.push_back((k + 0.5) * h);
    counts.push_back(static_cast<int>(cand.size()));
  }
  if (l == 0) counts.push_back(1);

  auto perp = perp_sign_family(split.codim());
  double sum = 0.0;
  int cnt = 0;
  std::vector<double> pt(split.n, 0.0);
  for (IndexIter it(counts); !it.done(); it.next()) {
    double r2 = 0.0;
    for (int i = 0; i < l; ++i) {
      pt[i] = axis_cand[i][it.idx()[i]];
      r2 += pt[i] * pt[i];
    }
    if (r2 >= 1.0) continue;
    for (const auto& sgn : perp) {
      for (int i = l; i < split.n; ++i) pt[i] = sgn[i - l] * 0.5 * h;
      double t = scale * std::sqrt(dist2(x, pt));
      if (t < 1.0) {
        sum += witness_profile(t);
        ++cnt;
      }
    }
  }
  if (hits) *hits = cnt;
  return sum;
}

double fJ_value(int J, double p, const PlaneSplit& split,
                std::span<const double> x) {
  double sum = 0.0;
  for (int j = 1; j <= J; ++j) sum += level_bump_sum(j, split, x, nullptr);
  return std::pow(static_cast<double>(J), -1.0 / p) * sum;
}

}  // namespace

GridFunction build_fJ(int J, double p, const PlaneSplit& split) {
  split.validate();
  perp_sign_family(split.codim());  // codim guard
  if (J < 2) throw std::invalid_argument("build_fJ: J >= 2 required");
  if (!(p >= 1.0)) throw std::invalid_argument("build_fJ: p >= 1 required");

  const double h = std::ldexp(1.0, -J - 2);
  char name[64];
  std::snprintf(name, sizeof name, "fJ(J=%d,p=%g)", J, p);
  FieldExpr e{name, [J, p, split](std::span<const double> x) {
                return fJ_value(J, p, split, x);
              }};
  auto g = sample(e, GridBox::cube(split.n, 4.0, h));
  declare_inner_support(g);
  return g;
}

double fJ_shell_min(int J, double p, const PlaneSplit& split, int samples,
                    unsigned long seed) {
  split.validate();
  const int l = split.l, codim = split.codim();
  const double rJ = std::ldexp(1.0, -J);
  std::mt19937_64 rng(seed);
  double lo = std::numeric_limits<double>::infinity();
  std::vector<double> x(split.n, 0.0);
  for (int s = 0; s < samples; ++s) {
    if (l > 0) {
      double r2;
      do {
        r2 = 0.0;
        for (int i = 0; i < l; ++i) {
          x[i] = 2.0 * uniform01(rng) - 1.0;
          r2 += x[i] * x[i];
        }
      } while (r2 >= 1.0);
    }
    double n2;
    do {
      n2 = 0.0;
      for (int i = 0; i < codim; ++i) {
        double u = 2.0 * uniform01(rng) - 1.0;
        x[l + i] = u * rJ;
        n2 += u * u;
      }
    } while (n2 >= 1.0);
    lo = std::min(lo, fJ_value(J, p, split, x));
  }
  return lo;
}

int fJ_overlap_max(int J, const PlaneSplit& split, int samples,
                   unsigned long seed) {
  split.validate();
  std::mt19937_64 rng(seed);
  int worst = 0;
  std::vector<double> x(split.n);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < split.n; ++i) x[i] = 4.0 * uniform01(rng) - 2.0;
    for (int j = 1; j <= J; ++j) {
      int hits = 0;
      level_bump_sum(j, split, x, &hits);
      worst = std::max(worst, hits);
    }
  }
  return worst;
}

GridFunction build_subcritical_witness(int j, double s, double p,
                                       const PlaneSplit& split) {
  split.validate();
  if (j < 1) throw std::invalid_argument("build_subcritical_witness: j >= 1");
  if (!(p >= 1.0))
    throw std::invalid_argument("build_subcritical_witness: p >= 1 required");

  const double h = std::ldexp(1.0, -j - 3);
  const double scale = std::ldexp(1.0, j);
  const double amp = std::pow(2.0, -j * (s - split.n / p));
  std::vector<double> c(split.n, 0.0);
  c[split.l] = 2.0 * std::ldexp(1.0, -j);  // support distance exactly 2^{-j}

  char name[80];
  std::snprintf(name, sizeof name, "witness(j=%d,s=%g,p=%g)", j, s, p);
  FieldExpr e{name, [scale, amp, c](std::span<const double> x) {
                double d2 = 0.0;
                for (std::size_t i = 0; i < c.size(); ++i) {
                  double t = x[i] - c[i];
                  d2 += t * t;
                }
                return amp * witness_profile(scale * std::sqrt(d2));
              }};
  auto g = sample(e, GridBox::cube(split.n, 2.0, h));
  declare_inner_support(g);
  return g;
}

namespace {

NormReport quotient_report(const char* method, const GridFunction& f,
                           const SmoothnessParams& params, const WeightSpec& w,
                           bool probe_when_undamped) {
  auto den = triebel_norm(f, params.s, params.p, params.q);
  if (den.value <= 1e-14)
    throw std::domain_error(std::string(method) + ": zero norm denominator");

  WeightedLpOpts opts;
  opts.split = params.split;
  opts.eps = params.eps;
  opts.exponent = params.s * params.p;
  opts.log_divisor = w.log_divisor;
  Kappa k = w.kappa;
  if (k.kind != Kappa::Kind::One)
    opts.kappa = [k](double d) { return k(d); };
  opts.probe = probe_when_undamped && !w.log_divisor && f.expr != nullptr;
  auto num = weighted_lp_norm(f, params.p, opts);

  NormReport rep;
  rep.value = num.value / den.value;
  rep.method = method;
  rep.s = params.s;
  rep.p = params.p;
  rep.q = params.q;
  rep.h = num.h;
  rep.cross_value = den.value;
  rep.divergence_suspected = num.divergence_suspected;
  rep.note = "kappa=" + w.kappa.label() +
             (w.log_divisor ? ", log-damped" : "");
  return rep;
}

}  // namespace

NormReport subcritical_quotient(const GridFunction& f,
                                const SmoothnessParams& params,
                                const WeightSpec& w) {
  params.validate();
  w.validate(params.eps);
  double cod = params.split.codim();
  if (!(params.s > 0.0 && params.s < cod / params.p))
    throw std::invalid_argument(
        "subcritical_quotient: need 0 < s < (n-l)/p");
  return quotient_report("subcritical-hardy", f, params, w, false);
}

NormReport critical_quotient(const GridFunction& f,
                             const SmoothnessParams& params,
                             const WeightSpec& w) {
  params.validate();
  w.validate(params.eps);
  auto cls = classify_criticality(params);
  if (!cls.critical || cls.r != 0)
    throw std::invalid_argument(
        "critical_quotient: parameters must sit on the zero-order critical "
        "line s = (n-l)/p");
  if (!(params.eps < 1.0))
    throw std::invalid_argument(
        "critical_quotient: collar must stop short of distance 1");
  return quotient_report("critical-hardy", f, params, w, true);
}

NormReport boundary_hardy_quotient(const GridFunction& f,
                                   const SmoothnessParams& params, int r) {
  params.validate();
  if (r < 1)
    throw std::invalid_argument("boundary_hardy_quotient: r >= 1 required");
  double cod = params.split.codim();
  if (!(params.s > r - 1 + cod / params.p))
    throw std::invalid_argument(
        "boundary_hardy_quotient: need s > r - 1 + (n-l)/p");
  if (f.box.align != Alignment::CellCentered ||
      !f.box.plane_on_lattice(params.split))
    throw std::invalid_argument(
        "boundary_hardy_quotient: cell-centered grid with the plane on the "
        "lattice required");
  if (!f.expr)
    throw std::invalid_argument(
        "boundary_hardy_quotient: trace audit needs the generating expression");

  // Trace audit on a node-centered resample: perpendicular derivatives of
  // order < r must vanish on the plane.
  GridBox nb = f.box;
  nb.align = Alignment::NodeCentered;
  auto gn = sample(*f.expr, nb);
  auto counts = nb.counts();
  const int l = params.split.l;
  std::vector<int> plane_idx(params.split.n, 0);
  for (int i = l; i < params.split.n; ++i)
    plane_idx[i] = static_cast<int>(std::llround(-nb.lo[i] / nb.h[i]));
  for (int order = 0; order < r; ++order) {
    for (const auto& beta : perpendicular_indices(params.split, order)) {
      auto db = order == 0 ? gn : derivative(gn, beta);
      double scale = std::max(db.max_abs(), 1e-30);
      std::vector<int> par_counts;
      for (int i = 0; i < l; ++i) par_counts.push_back(counts[i]);
      if (par_counts.empty()) par_counts.push_back(1);
      double sup = 0.0;
      std::vector<int> idx = plane_idx;
      for (IndexIter it(par_counts); !it.done(); it.next()) {
        for (int i = 0; i < l; ++i) idx[i] = it.idx()[i];
        sup = std::max(sup, std::abs(db.values[db.flat(idx)]));
      }
      if (sup > 1e-3 * scale) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "boundary_hardy_quotient: trace of D%s does not vanish "
                      "on the plane (sup %.3g vs scale %.3g)",
                      beta.str().c_str(), sup, scale);
        throw std::domain_error(buf);
      }
    }
  }

  WeightedLpOpts wo;
  wo.split = params.split;
  wo.eps = params.eps;
  wo.exponent = params.s * params.p;
  double num = weighted_lp_norm(f, params.p, wo).value;

  double den = 0.0;
  int terms = 0;
  for (const auto& alpha : perpendicular_indices(params.split, r)) {
    auto da = derivative(f, alpha);
    wo.exponent = (params.s - r) * params.p;
    den += weighted_lp_norm(da, params.p, wo).value;
    ++terms;
  }
  if (den <= 1e-14)
    throw std::domain_error("boundary_hardy_quotient: zero denominator");

  NormReport rep;
  rep.value = num / den;
  rep.method = "boundary-hardy";
  rep.s = params.s;
  rep.p = params.p;
  rep.q = params.q;
  rep.h = *std::max_element(f.box.h.begin(), f.box.h.end());
  char buf[64];
  std::snprintf(buf, sizeof buf, "r=%d, %d derivative terms", r, terms);
  rep.note = buf;
  return rep;
}

}  // namespace planorm
