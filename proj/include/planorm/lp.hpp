#pragma once

#include <span>
#include <vector>

#include "planorm/grid.hpp"

namespace planorm {

// Radial dyadic filter bank.  chi is 1 on [0,1], 0 on [2,inf), smooth and
// monotone in between; the ring filters phi_j telescope exactly:
//   sum_{j=0}^{J} phi_j(t) = chi(2^{-J} t),
// which equals 1 for t <= 2^J.  Choosing J = levels_for(t_max) therefore
// reproduces the identity on every represented frequency.  phi_j lives on the
// annulus {2^{j-1} <= |xi| <= 2^{j+1}} and is the dyadic dilate of phi_1.
struct FilterBank {
  int dim = 1;
  int top = 2;  // highest level carried by this bank

  static double chi(double t);
  static double phi(int j, double t);  // phi_0 = chi, phi_j = chi(2^-j t)-chi(2^-j+1 t)
  static int levels_for(double t_max);

  double multiplier(int j, std::span<const double> xi) const;  // phi(j, |xi|)
};

// dim-dimensional bank with levels 0..top; top >= 2.
FilterBank lp_filterbank(int dim, int top);

// Frequency-space band splitting of a sampled function.  Bands are kept in
// real space so norms for many (s,p,q) reuse one pair of transforms.
class LpDecomposition {
 public:
  // Requires a cell-centered grid and declare_inner_support() beforehand
  // (the transform is periodic; content near the box edge would wrap).
  // levels < 0 picks levels_for(max represented |xi|).
  static LpDecomposition build(const GridFunction& g, int levels = -1);

  int levels() const { return levels_; }
  const GridBox& box() const { return box_; }
  const std::vector<double>& band(int j) const { return bands_[j]; }
  bool telescoped() const { return telescoped_; }

  // || ( sum_j (2^{js} |u_j|)^q )^{1/q} ||_{L^p}, midpoint rule.
  // q may be infinite (sup over bands).  p finite.
  double lp_norm(double s, double p, double q) const;

  // Spectral route: cellvol * prod(L_i)^{-1/2} *
  //                 sqrt( sum_k (1+|xi_k|^2)^s |G_k|^2 ).
  // At s = 0 this equals the midpoint L2 norm exactly.
  double sobolev_norm(double s) const;

  double band_l2(int j) const;

 private:
  GridBox box_;
  std::vector<std::vector<double>> bands_;
  std::vector<double> spec_power_;  // |G_k|^2
  std::vector<double> spec_xi2_;    // |xi_k|^2
  int levels_ = 0;
  bool telescoped_ = false;
  double spec_scale_ = 0.0;
};

// Validating wrapper: finite s, p in [1,inf), q in [1,inf].  Fills cross_value
// with the spectral route when p = q = 2.
NormReport triebel_norm(const GridFunction& g, double s, double p, double q);
NormReport triebel_norm(const GridFunction& g, const SmoothnessParams& sp);

// 1-D F^s_{p,q} norm of a cell-centered line with spacing h.
double lp_norm_1d(std::span<const double> line, double h, double s, double p,
                  double q);

// L^p aggregate over transverse positions of 1-D F^s_{p,p} norms of the lines
// running along `axis`.
double fubini_axis_norm(const GridFunction& g, int axis, double s, double p);

}  // namespace planorm
