#pragma once

#include <span>
#include <string>
#include <vector>

#include "planorm/geometry.hpp"
#include "planorm/grid.hpp"

namespace planorm {

// Multiplicative weight factor on (0,1): constant one, a power of |log t|, or
// a negative power of t.  Positive and non-increasing toward 0.
struct Kappa {
  enum class Kind { One, LogPower, PowerNeg };
  Kind kind = Kind::One;
  double delta = 0.0;

  double operator()(double t) const;
  std::string label() const;

  static Kappa one();
  static Kappa log_power(double delta);
  static Kappa power_neg(double delta);
  static Kappa parse(const std::string& text);  // "1" | "log^D" | "t^-D"
};

struct WeightSpec {
  Kappa kappa;
  bool log_divisor = false;

  // Samples kappa on (0, eps]: positive, non-increasing.  Throws otherwise.
  void validate(double eps = 0.5) const;
};

// Marker points spread through the dyadic shell
//   { |x'| < 1,  2^{-level-1} <= |x''| < 2^{-level} }.
// Parallel coordinates run over half-integer multiples of the spacing
// 2^{-level}; perpendicular offsets sit at half-spacing distance from the
// plane (codim 1: +-1/2 spacing; codim 2,3: the diagonal family).  Pairwise
// distances are >= 2^{-level} with equality attained, and every shell point
// lies within 2^{-level} of some marker (sqrt(n) 2^{-level} guaranteed).
struct ShellLattice {
  PlaneSplit split;
  int level = 1;
  std::vector<std::vector<double>> points;

  std::size_t count() const { return points.size(); }
  double spacing() const;
  double min_pairwise_distance() const;
};

ShellLattice shell_lattice(int level, const PlaneSplit& split);

// Max over `samples` random shell points of the distance to the nearest
// lattice point.
double covering_radius_audit(const ShellLattice& lat, int samples,
                             unsigned long seed);

// Radial bump profile: 1 on [0,1/2], 0 on [1,inf), smooth in between.
double witness_profile(double t);

// [ sum (|g(t)|/t)^p t^a ] / [ sum |g'(t)|^p t^a ] over the 1-D grid of g,
// g' by 4th-order differences.  Needs p >= 1 and p > a+1; throws a
// degenerate-input error when the derivative integral is essentially zero.
double hardy_quotient_1d(const GridFunction& g, double p, double a);

// t^beta sampled on (0,T) with N cells.
GridFunction power_family_1d(double beta, double T, int N);

// Multi-bump function J^{-1/p} sum_{j=1..J} sum_k psi(2^{j-1}(x - x^{j,k}))
// over the shell lattices of levels 1..J, sampled on [-4,4]^n with
// h = 2^{-J-2}.  At least J^{1/p'} throughout {|x'|<1, |x''|<2^{-J}}.
GridFunction build_fJ(int J, double p, const PlaneSplit& split);

// Min of the multi-bump sum over random points of {|x'|<1, |x''|<2^{-J}}.
double fJ_shell_min(int J, double p, const PlaneSplit& split, int samples,
                    unsigned long seed);

// Max number of same-level bumps meeting one point, over random probes.
int fJ_overlap_max(int J, const PlaneSplit& split, int samples,
                   unsigned long seed);

// Single bump 2^{-j(s-n/p)} psi(2^j x - m) with the shift m placing the
// support at distance exactly 2^{-j} from the plane (within [1,3]*2^{-j}).
// Sampled on [-2,2]^n with h = 2^{-j-3}.
GridFunction build_subcritical_witness(int j, double s, double p,
                                       const PlaneSplit& split);

// [ integral_{collar} |kappa(d) f|^p d^{-sp} ]^{1/p} / triebel_norm(f,s,p,q).
// Needs the subcritical range 0 < s < (n-l)/p.
NormReport subcritical_quotient(const GridFunction& f,
                                const SmoothnessParams& params,
                                const WeightSpec& w);

// [ integral_{collar} |kappa(d) f / log d|^p d^{-(n-l)} ]^{1/p} divided by
// triebel_norm(f, (n-l)/p, p, q).  Parameters must sit exactly at the
// zero-order critical line.  With log_divisor=false the integral is kept as
// written (no log damping) and the report flags refinement divergence when
// the function does not vanish on the plane.
NormReport critical_quotient(const GridFunction& f,
                             const SmoothnessParams& params,
                             const WeightSpec& w);

// || d^{-s} f ||_p / sum_{|alpha|=r, alpha perpendicular} || d^{r-s} D^alpha f ||_p
// over the collar-truncated box.  Audits that perpendicular derivatives of
// order < r vanish on the plane (resampled node-centered) before trusting
// the quotient; needs s > r - 1 + (n-l)/p.
NormReport boundary_hardy_quotient(const GridFunction& f,
                                   const SmoothnessParams& params, int r);

}  // namespace planorm
