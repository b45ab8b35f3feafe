#include "planorm/numeric.hpp"

namespace planorm {

namespace {
double pairwise_rec(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> v) {
  return pairwise_rec(v.data(), v.size());
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double glue_f1(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double glue_step(double x) {
  const double a = glue_f1(x);
  const double b = glue_f1(1.0 - x);
  return a / (a + b);
}

double cutoff_high(double t, double a, double b) {
  return glue_step((b - t) / (b - a));
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace planorm
