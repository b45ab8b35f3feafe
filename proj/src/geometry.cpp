#include "planorm/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace planorm {

PlaneSplit::PlaneSplit(int n_, int l_) : n(n_), l(l_) { validate(); }

void PlaneSplit::validate() const {
  if (n < 1) throw std::invalid_argument("PlaneSplit: n must be >= 1");
  if (l < 0 || l >= n)
    throw std::invalid_argument("PlaneSplit: need 0 <= l < n");
}

MultiIndex::MultiIndex(std::vector<int> e) : entries(std::move(e)) {
  for (int v : entries)
    if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

MultiIndex MultiIndex::zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }

int MultiIndex::order() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

bool MultiIndex::perpendicular(int l) const {
  for (int i = 0; i < l && i < dim(); ++i)
    if (entries[i] != 0) return false;
  return true;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(entries[i]);
  }
  return s + ")";
}

namespace {
void emit_perp(const PlaneSplit& split, int axis, int remaining,
               std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (axis == split.n - 1) {
    cur[axis] = remaining;
    out.push_back(MultiIndex(cur));
    cur[axis] = 0;
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur[axis] = v;
    emit_perp(split, axis + 1, remaining - v, cur, out);
  }
  cur[axis] = 0;
}
}  // namespace

std::vector<MultiIndex> perpendicular_indices(const PlaneSplit& split, int order) {
  if (order < 0) throw std::invalid_argument("perpendicular_indices: order < 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(split.n, 0);
  if (split.l == split.n) return out;
  emit_perp(split, split.l, order, cur, out);
  return out;
}

std::optional<Rational> Rational::parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto parse_ll = [](const std::string& t, long long& out) {
    if (t.empty()) return false;
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno || end != t.c_str() + t.size()) return false;
    out = v;
    return true;
  };
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long a, b;
    if (!parse_ll(text.substr(0, slash), a) || !parse_ll(text.substr(slash + 1), b))
      return std::nullopt;
    if (b == 0) return std::nullopt;
    if (b < 0) { a = -a; b = -b; }
    long long g = std::gcd(std::abs(a), b);
    if (g > 1) { a /= g; b /= g; }
    return Rational{a, b};
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
    if (tail.size() > 9) return std::nullopt;
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    long long ip, fp;
    if (!parse_ll(head, ip) || (!tail.empty() && !parse_ll(tail, fp)))
      return std::nullopt;
    if (tail.empty()) fp = 0;
    long long den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    long long num = ip * den + fp;
    if (neg) num = -num;
    long long g = std::gcd(std::abs(num), den);
    if (g > 1) { num /= g; den /= g; }
    return Rational{num, den};
  }
  long long v;
  if (!parse_ll(text, v)) return std::nullopt;
  return Rational{v, 1};
}

void SmoothnessParams::validate() const {
  if (!(s > 0.0)) throw std::invalid_argument("params: s must be positive");
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("params: p must lie in [1, inf)");
  if (!(q > 0.0)) throw std::invalid_argument("params: q must be positive");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("params: collar width eps must lie in (0,1)");
  PlaneSplit check(split.n, split.l);  // revalidates the split
  (void)check;
}

CriticalityClass classify_criticality(const SmoothnessParams& sp) {
  sp.validate();
  const long long m = sp.split.codim();
  if (sp.s_exact && sp.p_exact) {
    // t = s - m/p = (a*c - m*d*b) / (b*c) with s=a/b, p=c/d
    const long long a = sp.s_exact->num, b = sp.s_exact->den;
    const long long c = sp.p_exact->num, d = sp.p_exact->den;
    const long long num = a * c - m * d * b;
    const long long den = b * c;  // positive: b,c > 0 after parse + validate
    if (num % den == 0 && num / den >= 0)
      return {true, static_cast<int>(num / den)};
    long long fl = num / den;
    if (num % den != 0 && ((num < 0) != (den < 0))) fl -= 1;
    if (fl < -1) fl = -1;
    return {false, static_cast<int>(fl)};
  }
  const double t = sp.s - static_cast<double>(m) / sp.p;
  const double rt = std::round(t);
  if (std::abs(t - rt) < 1e-9 && rt >= -0.5)
    return {true, static_cast<int>(rt)};
  int fl = static_cast<int>(std::floor(t));
  if (fl < -1) fl = -1;
  return {false, fl};
}

DistanceWeights distance_weights(std::span<const double> x, const PlaneSplit& split,
                                 double eps) {
  if (static_cast<int>(x.size()) != split.n)
    throw std::invalid_argument("distance_weights: point dimension mismatch");
  double d2 = 0.0;
  for (int i = split.l; i < split.n; ++i) d2 += x[i] * x[i];
  DistanceWeights w;
  w.d = std::sqrt(d2);
  w.delta = std::min(w.d, 1.0);
  w.in_collar = (w.d > 0.0 && w.d < eps);
  return w;
}

SmoothnessConstants smoothness_constants(double s, double p, double q, int n) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::invalid_argument("smoothness_constants: p, q must be positive");
  SmoothnessConstants c;
  auto plus = [](double v) { return v > 0.0 ? v : 0.0; };
  c.sigma_p = n * plus(1.0 / p - 1.0);
  c.sigma_pq = n * plus(1.0 / std::min(p, q) - 1.0);
  // floor/frac with {s} in (0,1]: integers split as s = (s-1) + 1
  c.floor_s = static_cast<int>(std::ceil(s)) - 1;
  c.frac_s = s - c.floor_s;
  c.p_conj = (p > 1.0) ? p / (p - 1.0) : std::numeric_limits<double>::infinity();
  return c;
}

SmoothnessConstants smoothness_constants(const SmoothnessParams& sp) {
  sp.validate();
  return smoothness_constants(sp.s, sp.p, sp.q, sp.split.n);
}

}  // namespace planorm
