#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace planorm {

// Deterministic pairwise reduction. Always reduce in the caller's canonical
// order so repeated runs produce bit-identical sums.
double pairwise_sum(std::span<const double> v);

// Uniform double in [0,1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this is not.
double uniform01(std::mt19937_64& rng);

// exp(-1/x) for x > 0, else 0.  C^inf glue piece.
double glue_f1(double x);

// Monotone C^inf step: 0 for x <= 0, 1 for x >= 1.
double glue_step(double x);

// C^inf cutoff in one variable: 1 for t <= a, 0 for t >= b (a < b).
double cutoff_high(double t, double a, double b);

// Floor division for possibly negative numerators.
long long floor_div(long long a, long long b);

// Odometer over a rectangular index set, row-major (axis 0 slowest).
class IndexIter {
public:
  explicit IndexIter(std::vector<int> counts)
      : counts_(std::move(counts)), idx_(counts_.size(), 0) {
    for (int c : counts_)
      if (c <= 0) done_ = true;
  }
  bool done() const { return done_; }
  const std::vector<int>& idx() const { return idx_; }
  void next() {
    for (int a = static_cast<int>(idx_.size()) - 1; a >= 0; --a) {
      if (++idx_[a] < counts_[a]) return;
      idx_[a] = 0;
    }
    done_ = true;
  }

private:
  std::vector<int> counts_;
  std::vector<int> idx_;
  bool done_ = false;
};

}  // namespace planorm
