#pragma once

#include <string>
#include <vector>

#include "planorm/geometry.hpp"
#include "planorm/grid.hpp"

namespace planorm {

// A closed-form test function with known behaviour at the plane x'' = 0.
// Every entry can be sampled in both alignments from the same expression:
// node-centered grids put nodes on the plane (for traces), cell-centered
// grids keep every sample at positive distance (for weighted integrals).
struct CorpusEntry {
  std::string id;
  FieldExpr expr;
  PlaneSplit split{2, 1};
  // order of the first normal derivative that does not vanish on the
  // plane; -1 means the support avoids the plane entirely
  int vanish_order = 0;
  double half = 5.0;  // sample box half-width

  GridFunction sample_node(double h) const;
  GridFunction sample_cell(double h) const;
  // the dyadic dilate x -> expr(2^k x), support shrinks accordingly
  FieldExpr dilate(int k) const;
};

// twelve entries on the split (2,1): three with nonzero boundary values
// (one a plateau that is identically 1 near the plane), four of order 1,
// two of order 2, one of order 3, and two supported away from the plane
const std::vector<CorpusEntry>& builtin_corpus();

// smooth transition equal to 1 on [0, lo] and 0 on [hi, inf)
double plateau_profile(double t, double lo, double hi);

}  // namespace planorm
