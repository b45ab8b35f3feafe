#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace planorm {

// Ambient split R^n = R^l x R^{n-l}.  The distinguished plane is {x'' = 0},
// where x'' collects the trailing n-l coordinates.
struct PlaneSplit {
  int n = 2;
  int l = 1;

  PlaneSplit() = default;
  PlaneSplit(int n_, int l_);

  int codim() const { return n - l; }
  bool perpendicular_axis(int axis) const { return axis >= l; }
  void validate() const;
};

struct MultiIndex {
  std::vector<int> entries;

  explicit MultiIndex(std::vector<int> e);
  static MultiIndex zeros(int n);

  int dim() const { return static_cast<int>(entries.size()); }
  int order() const;
  // true when the first l entries vanish (derivatives hit only x'' axes)
  bool perpendicular(int l) const;
  std::string str() const;

  bool operator==(const MultiIndex& o) const { return entries == o.entries; }
};

// All alpha in N_l^n with |alpha| == order (first l entries zero).
std::vector<MultiIndex> perpendicular_indices(const PlaneSplit& split, int order);

// Exact rational a/b used when parameters arrive as fractions on the CLI.
struct Rational {
  long long num = 0;
  long long den = 1;

  static std::optional<Rational> parse(const std::string& text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct SmoothnessParams {
  double s = 1.0;
  double p = 2.0;
  double q = 2.0;
  PlaneSplit split;
  double eps = 0.5;  // collar width
  // set when the CLI received exact fractions; enables exact criticality tests
  std::optional<Rational> s_exact;
  std::optional<Rational> p_exact;

  void validate() const;  // throws std::invalid_argument on violation
};

struct CriticalityClass {
  bool critical = false;
  int r = -1;

  bool operator==(const CriticalityClass& o) const {
    return critical == o.critical && r == o.r;
  }
};

// Critical(r) iff s - (n-l)/p is a nonnegative integer r; otherwise
// NonCritical with r = floor(s - (n-l)/p), clamped to >= -1 (all cases with
// no admissible traces behave identically).  Real inputs use a 1e-9 window;
// exact rationals decide exactly.
CriticalityClass classify_criticality(const SmoothnessParams& sp);

struct DistanceWeights {
  double d = 0.0;      // distance |x''| to the plane
  double delta = 0.0;  // min(d, 1)
  bool in_collar = false;
};

DistanceWeights distance_weights(std::span<const double> x, const PlaneSplit& split,
                                 double eps);

struct SmoothnessConstants {
  double sigma_p = 0.0;
  double sigma_pq = 0.0;
  int floor_s = 0;
  double frac_s = 0.0;  // in (0,1]; floor_s + frac_s == s
  double p_conj = 0.0;  // Hoelder conjugate, inf for p = 1
};

// Free-standing so the sigma formulas can be probed outside the p >= 1 range
// admitted by SmoothnessParams.
SmoothnessConstants smoothness_constants(double s, double p, double q, int n);
SmoothnessConstants smoothness_constants(const SmoothnessParams& sp);

}  // namespace planorm
