#pragma once

#include <vector>

#include "planorm/geometry.hpp"
#include "planorm/grid.hpp"
#include "planorm/whitney.hpp"

namespace planorm {

// One entry of the jet on the plane: the restriction of a perpendicular
// derivative, together with its F_{p,p} norm at the shifted smoothness
// s - (n-l)/p - |alpha|.
struct TraceComponent {
  MultiIndex alpha;
  GridFunction restriction;  // node-centered grid on the plane
  NormReport norm;
};

struct TraceJet {
  int order = 0;
  PlaneSplit split;
  std::vector<TraceComponent> components;  // all perpendicular |alpha| <= order
};

// Node-centered f only; requires s > r + (n-l)/p, below which no trace of
// order r is defined.
TraceJet trace_jet(const GridFunction& f, const SmoothnessParams& sp, int r);

// One collar integral (int_collar |D^alpha f|^p d^{-(n-l)})^{1/p} plus its
// refinement history.  A raised flag is a verdict on membership, not an error.
struct CollarTerm {
  MultiIndex alpha;
  double value = 0.0;
  RefinementProbe probe;  // empty when no generating expression is attached
  bool divergence_suspected = false;
};

struct ReinforcedNormBreakdown {
  CriticalityClass cls;
  double f_norm = 0.0;
  std::vector<CollarTerm> collar_terms;  // critical class only: all |alpha| = r
  double total = 0.0;

  bool any_divergent() const;
};

// Critical class: plain norm plus the order-r perpendicular collar terms.
// Everywhere else the space coincides with the plain one and the breakdown
// carries no collar terms.
ReinforcedNormBreakdown reinforced_norm(const GridFunction& f,
                                        const SmoothnessParams& sp);

// p-sum over the Whitney cubes of the norm of rho_Q f, each term on its own
// local grid sampled from f's expression.  The tail over the deepest levels
// feeds the divergence verdict: sustained growth of the running sum above 5%
// per level marks non-membership.
NormReport rloc_norm(const GridFunction& f, const WhitneyDecomposition& dec,
                     const PartitionOfUnity& pou, const SmoothnessParams& sp);

// Equivalent characterization: plain norm plus || delta^{-s} f ||_p over the
// whole box, delta = min(d,1).  The weighted term carries the divergence flag.
NormReport rloc_equiv_norm(const GridFunction& f, const SmoothnessParams& sp);

// || f(lambda .) || / ( lambda^{s-n/p} || f || ) for dyadic lambda = 2^{-k}
// and supp f inside the ball of radius lambda.  The scaled samples are reused
// exactly, so the s = 0 surrogate (plain L_p) is an identity up to rounding.
double homogeneity_ratio(const GridFunction& f, double lambda,
                         const SmoothnessParams& sp);

// [ sum over axes of the line-wise F_{p,p} aggregate ] / || f ||_{F^s_{p,p}}
// on the n = 2, l = 1 desk configuration.
double fubini_ratio(const GridFunction& f, const SmoothnessParams& sp, int l);

}  // namespace planorm
