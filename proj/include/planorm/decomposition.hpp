#pragma once

#include <span>
#include <string>
#include <vector>

#include "planorm/corpus.hpp"
#include "planorm/geometry.hpp"
#include "planorm/grid.hpp"

namespace planorm {

struct MembershipOptions {
  double h = 1.0 / 64;       // base resolution for the norm verdicts
  double h_breakdown = 1.0 / 32;  // base resolution for the collar breakdown
  double trace_tol = 1e-3;   // a trace component below this norm vanishes
};

// One corpus entry examined under one parameter set.  Verdicts are
// desk-scale: finite and refinement-stable means member, sustained growth
// under refinement means non-member.  Divergence verdicts only count when
// they reproduce at two independent resolution pairs.
struct MembershipReport {
  std::string entry;
  SmoothnessParams params;
  CriticalityClass cls{false, 0};

  bool in_F = false;          // plain norm finite and stable under h -> h/2
  double f_norm = 0.0;
  double f_refine_delta = 0.0;

  int traces_checked = -1;    // highest normal order examined; -1 = none
  std::vector<bool> trace_vanishes;
  double trace_tol = 0.0;
  double max_vanishing_trace = 0.0;
  double min_surviving_trace = 0.0;

  bool in_reinforced = false;
  double reinforced_total = 0.0;
  bool reinforced_divergent = false;

  bool in_rloc = false;       // via the distance-weighted equivalent norm
  double rloc_value = 0.0;
  bool rloc_flag_coarse = false;
  bool rloc_flag_fine = false;

  bool consistent_with_theorem = false;
  double wall_ms = 0.0;

  // true when every checked order <= m vanishes (vacuous for m < 0)
  bool traces_vanish_through(int m) const;
};

MembershipReport membership_report(const CorpusEntry& e,
                                   const SmoothnessParams& params,
                                   const MembershipOptions& opt = {});

// One measured quantity with its refinement history.
struct ExperimentRecord {
  std::string entry;
  SmoothnessParams params;
  CriticalityClass cls{false, 0};
  std::string kind;
  double h = 0.0;
  double value = 0.0;       // at h
  double value_half = 0.0;  // at h/2
  double rel_delta = 0.0;
  bool flagged = false;
  std::string note;
  double wall_ms = 0.0;
};

// Noncritical regime: for entries whose traces through order r vanish, the
// collar quotient ||d^{-s} f||_p / (full norm) is recorded for each dyadic
// dilate f(2^k .), k = 0..3, plus one bracket record per entry (flagged when
// max/min exceeds 4).  Entries with a surviving trace get their weighted
// term divergence-checked instead.
std::vector<ExperimentRecord> run_noncritical_experiment(
    const std::vector<CorpusEntry>& corpus, const SmoothnessParams& params,
    double h = 1.0 / 32);

// Critical regime: entries with traces through order r-1 vanishing and a
// finite collar breakdown get the chain quotient
// ||d^{-s} f||_p / sum_{|alpha|=r} ||d^{-(n-l)/p} D^alpha f||_p recorded
// across the dilation family with a bracket record; entries whose breakdown
// diverges are reported as strict-inclusion witnesses.
std::vector<ExperimentRecord> run_critical_experiment(
    const std::vector<CorpusEntry>& corpus, const SmoothnessParams& params,
    double h = 1.0 / 32);

// Collar mass of the built-in plateau (identically 1 near the plane) on a
// decreasing resolution schedule, fitted against c*log(1/h) + b, with a
// convergent control alongside.  Works on the (2,1) and (3,1) splits.
struct DivergenceProbeRecord {
  SmoothnessParams params;
  std::vector<double> hs;
  std::vector<double> values;         // collar p-th power mass of the plateau
  double fit_c = 0.0, fit_b = 0.0;
  double rel_residual = 0.0;
  bool log_divergent = false;         // good fit, growing values
  std::vector<double> deltas;         // successive value differences
  std::vector<double> control_values; // same mass for the vanishing control
  std::vector<double> control_deltas;
  bool control_converges = false;     // control deltas shrink by >= 1.5x
  std::string note;
};

DivergenceProbeRecord reinforced_divergence_probe(const SmoothnessParams& params,
                                                  std::span<const double> hs);

}  // namespace planorm
