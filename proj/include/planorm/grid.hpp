#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "planorm/geometry.hpp"

namespace planorm {

enum class Alignment { CellCentered, NodeCentered };

// Axis-aligned sampling box.  Cell-centered grids place samples at
// lo + (k+1/2)h (no sample ever lies on a cell boundary, in particular not on
// the plane when the plane sits on the lattice); node-centered grids place
// samples at lo + k h including both endpoints.
struct GridBox {
  std::vector<double> lo, hi, h;
  Alignment align = Alignment::CellCentered;

  static GridBox cell_centered(std::vector<double> lo, std::vector<double> hi,
                               double h);
  static GridBox node_centered(std::vector<double> lo, std::vector<double> hi,
                               double h);
  // [-half, half]^n
  static GridBox cube(int n, double half, double h,
                      Alignment a = Alignment::CellCentered);

  int dim() const { return static_cast<int>(lo.size()); }
  std::vector<int> counts() const;  // samples per axis
  std::size_t size() const;
  double cell_volume() const;
  double coord(int axis, int k) const;
  std::vector<double> point(std::span<const int> idx) const;
  void check() const;  // throws on inconsistent extents/spacings

  // true when {x_i = 0} is a lattice plane of axis i for every i >= split.l
  bool plane_on_lattice(const PlaneSplit& split) const;
};

struct FieldExpr {
  std::string name;
  std::function<double(std::span<const double>)> fn;

  double operator()(std::span<const double> x) const { return fn(x); }
};

struct GridFunction {
  GridBox box;
  std::vector<double> values;  // row-major, axis 0 slowest
  std::string provenance;
  bool inner_supported = false;
  std::shared_ptr<const FieldExpr> expr;  // kept for resampling when known

  std::size_t flat(std::span<const int> idx) const;
  double max_abs() const;
};

// Evaluates expr at every sample point; throws std::domain_error naming the
// offending node if a sample is non-finite.
GridFunction sample(const FieldExpr& expr, const GridBox& box);

// Verifies the samples essentially vanish outside the central half of the box
// (per axis) and sets the inner_supported flag.  Returns the measured
// outer/global amplitude ratio; throws when the ratio exceeds rel_tol.
double declare_inner_support(GridFunction& g, double rel_tol = 1e-3);

// Midpoint-rule integral of the raw samples (cell-centered only).
double integrate(const GridFunction& g);

struct NormReport {
  double value = 0.0;
  std::string method;
  double s = 0.0, p = 0.0, q = 0.0;
  double h = 0.0;
  bool divergence_suspected = false;
  std::optional<double> cross_value;  // secondary route, when one exists
  std::string note;
};

double plain_lp_norm(const GridFunction& g, double p);

struct WeightedLpOpts {
  PlaneSplit split;
  double exponent = 0.0;     // a in the weight d^{-a}
  bool log_divisor = false;  // divide the integrand by |log d|^p
  bool use_delta = false;    // weight with delta = min(d,1) instead of d
  bool full_domain = false;  // integrate over the whole box, not just the collar
  double eps = 0.5;          // collar width
  std::function<double(double)> kappa;  // optional extra factor kappa(d)
  bool probe = false;  // resample at h/2 (expr required) and flag growth > 5%
};

// [ sum over admitted cells of |kappa(d) g|^p w(d)^{-a} (/|log d|^p) vol ]^{1/p}
// evaluated at cell centres; requires a cell-centered grid whose lattice
// contains the plane so d >= h/2 on every cell.
NormReport weighted_lp_norm(const GridFunction& g, double p,
                            const WeightedLpOpts& opts);

// Repeated 4th-order finite differencing, axis by axis; one-sided stencils of
// the same order near the boundary.  Needs >= 9 samples per axis and
// |alpha| <= 4.
GridFunction derivative(const GridFunction& g, const MultiIndex& alpha);

// Convergence-vs-divergence bookkeeping for a quantity evaluated on a
// refinement schedule h_0 > h_1 > ...  Divergence is a verdict, not an error:
// sustained growth above 5% per halving over the last two steps that is not
// collapsing at the convergent rate.  A resolved quadrature shrinks its
// deltas geometrically (>= 1.5x per halving); log growth shrinks them only
// harmonically, so the delta ratio separates the two.
struct RefinementProbe {
  std::vector<double> hs;
  std::vector<double> values;
  std::vector<double> rel_delta;  // (v_{i+1} - v_i) / |v_i|
  bool divergent = false;
  bool stable = false;
};

RefinementProbe probe_refinement(const std::function<double(double)>& value_at_h,
                                 std::span<const double> hs);

}  // namespace planorm
