#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "planorm/geometry.hpp"
#include "planorm/grid.hpp"

namespace planorm {

// Corner-anchored dyadic cube: [m_i, m_i+1] * 2^-level per axis.  Corner
// anchoring keeps every lattice exactly refinable (each cube splits into 2^n
// children), which the selection rule below relies on.
struct DyadicCube {
  int level = 0;
  std::vector<long long> m;

  double side() const;
  std::vector<double> corner() const;
  std::vector<double> center() const;
  double diam() const;  // side * sqrt(dim)

  // Integer-exact squared distances to the plane, in lattice units:
  // t2: of the cube itself (units 2^-level),
  // u2: of the concentric double, in half-units (units 2^-level-1).
  long long t2(const PlaneSplit& split) const;
  long long u2(const PlaneSplit& split) const;
  double dist(const PlaneSplit& split) const;
  double dist_doubled(const PlaneSplit& split) const;

  bool operator==(const DyadicCube& o) const = default;
};

// Selection rule, all in integers: a cube is tentative when
// sum of t_i^2 >= 4n (i.e. dist >= 2 diam), and selected when it is tentative
// and its parent is not.  Tentativeness is inherited by children, so each
// point of the domain sees exactly one selected cube on its ancestor chain
// once its chain becomes tentative at all.
struct WhitneyDecomposition {
  PlaneSplit split;
  std::vector<double> lo, hi;  // bounding box
  int j_max = 0;
  std::vector<DyadicCube> cubes;             // grouped by level, lex order in m
  std::vector<std::size_t> level_begin;      // size j_max + 2

  std::size_t count() const { return cubes.size(); }
  std::size_t count_at(int level) const;
  bool selected_at(int level, std::span<const long long> m) const;
  std::optional<std::size_t> find(int level, std::span<const long long> m) const;

  // Indices of cubes whose concentric double contains x (open), via per-level
  // lattice window lookups.
  std::vector<std::size_t> cubes_at(std::span<const double> x) const;

 private:
  friend WhitneyDecomposition whitney_decompose(const PlaneSplit&,
                                                std::span<const double>,
                                                std::span<const double>, int);
  std::vector<std::map<std::vector<long long>, std::size_t>> index_;
};

WhitneyDecomposition whitney_decompose(const PlaneSplit& split,
                                       std::span<const double> lo,
                                       std::span<const double> hi, int j_max);

struct WhitneyDiagnostics {
  bool disjoint = false;
  double covering_defect = 0.0;  // uncovered volume, exact cell count
  double collar_bound = 0.0;     // volume of the residual collar, closed form
  double ratio_min = 0.0, ratio_max = 0.0;    // dist / diam over selected cubes
  double ratio1_min = 0.0, ratio1_max = 0.0;  // dist of the double / side
  int max_adjacent_level_gap = 0;
  std::size_t cube_count = 0;
  std::vector<std::size_t> per_level;
  bool pass = false;
};

WhitneyDiagnostics verify_whitney(const WhitneyDecomposition& dec);

// Offset that makes (0,...,0, c0, 0, ...) a selected corner index at every
// level: smallest integer c with c^2 >= 4n.
long long canonical_interior_offset(int n);

// Cube (m' = 0, m'' = (c0, 0, ...)) at the given level; the local cube
// configuration around it is a scaled copy across levels, which makes it the
// natural probe for scale-invariant bounds.
std::size_t canonical_interior_cube(const WhitneyDecomposition& dec, int level);

struct Jet2 {
  double v = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;  // row-major dim x dim
};

// Shepard weights over the doubled cubes: raw bump
//   B_Q(x) = prod_i exp(-1 / (1 - t_i^2)),  t_i = (x_i - c_i) / side,
// and rho_Q = B_Q / sum B.  The sum is bounded below on the union of the
// selected cubes, so each rho_Q is smooth with scale-uniform derivatives.
class PartitionOfUnity {
 public:
  PartitionOfUnity(std::shared_ptr<const WhitneyDecomposition> dec, int order);

  const WhitneyDecomposition& decomposition() const { return *dec_; }
  int order() const { return order_; }

  double bump(std::size_t cube, std::span<const double> x) const;
  double bump_sum(std::span<const double> x) const;
  double evaluate(std::size_t cube, std::span<const double> x) const;
  double evaluate_sum(std::span<const double> x) const;  // 1 on covered region
  std::size_t overlap_count(std::span<const double> x) const;

  Jet2 bump_jet(std::size_t cube, std::span<const double> x) const;
  Jet2 jet2(std::size_t cube, std::span<const double> x) const;

  // Analytic for |alpha| <= 2; centered differencing of the analytic jet
  // above that, up to order 4.
  double derivative(std::size_t cube, std::span<const double> x,
                    const MultiIndex& alpha) const;

  FieldExpr weight_expr(std::size_t cube) const;

 private:
  std::shared_ptr<const WhitneyDecomposition> dec_;
  int order_ = 2;
};

PartitionOfUnity partition_of_unity(
    std::shared_ptr<const WhitneyDecomposition> dec, int order = 2);

// Cell-centered box around the cube's concentric double with a margin:
// extent factor * side on each side of the center.
GridBox local_box(const DyadicCube& cube, double factor = 2.0,
                  int cells_per_axis = 64);

}  // namespace planorm
