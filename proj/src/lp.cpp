#include "planorm/lp.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include "planorm/numeric.hpp"

namespace planorm {

double FilterBank::chi(double t) { return cutoff_high(t, 1.0, 2.0); }

double FilterBank::phi(int j, double t) {
  if (j == 0) return chi(t);
  return chi(std::ldexp(t, -j)) - chi(std::ldexp(t, -j + 1));
}

int FilterBank::levels_for(double t_max) {
  int j = 0;
  while (std::ldexp(1.0, j) < t_max && j < 62) ++j;
  return j;
}

double FilterBank::multiplier(int j, std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim)
    throw std::invalid_argument("FilterBank: frequency dimension mismatch");
  if (j < 0 || j > top) throw std::invalid_argument("FilterBank: level out of range");
  double t2 = 0.0;
  for (double c : xi) t2 += c * c;
  return phi(j, std::sqrt(t2));
}

FilterBank lp_filterbank(int dim, int top) {
  if (dim < 1) throw std::invalid_argument("lp_filterbank: dim must be >= 1");
  if (top < 2) throw std::invalid_argument("lp_filterbank: need at least levels 0..2");
  FilterBank b;
  b.dim = dim;
  b.top = top;
  return b;
}

namespace {

// FFTW planning is not thread-safe; execution on fresh arrays is.  Plans are
// created unaligned so one cached plan serves any buffer, and kept for the
// process lifetime.
std::mutex g_plan_mutex;
std::map<std::string, fftw_plan>& plan_table() {
  static std::map<std::string, fftw_plan> t;
  return t;
}

fftw_plan plan_for(const std::vector<int>& dims, int sign,
                   std::complex<double>* in, std::complex<double>* out) {
  std::string key = std::to_string(sign);
  for (int d : dims) key += ":" + std::to_string(d);
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto& tab = plan_table();
  auto it = tab.find(key);
  if (it != tab.end()) return it->second;
  fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                              reinterpret_cast<fftw_complex*>(in),
                              reinterpret_cast<fftw_complex*>(out), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  tab.emplace(std::move(key), p);
  return p;
}

void run_plan(fftw_plan p, std::complex<double>* in, std::complex<double>* out) {
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

LpDecomposition LpDecomposition::build(const GridFunction& g, int levels) {
  if (g.box.align != Alignment::CellCentered)
    throw std::invalid_argument("LpDecomposition: cell-centered grids only");
  if (!g.inner_supported)
    throw std::invalid_argument(
        "LpDecomposition: call declare_inner_support first; the transform is "
        "periodic and edge content would wrap");

  LpDecomposition d;
  d.box_ = g.box;
  auto counts = g.box.counts();
  const std::size_t T = g.values.size();
  const int n = g.box.dim();

  std::vector<std::complex<double>> in(T), spec(T);
  for (std::size_t k = 0; k < T; ++k) in[k] = g.values[k];
  auto fwd = plan_for(counts, FFTW_FORWARD, in.data(), spec.data());
  run_plan(fwd, in.data(), spec.data());

  // DFT bin frequencies, wrapped to the symmetric range.
  std::vector<std::vector<double>> freq(n);
  double ximax2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double L = g.box.hi[i] - g.box.lo[i];
    freq[i].resize(counts[i]);
    double amax = 0.0;
    for (int k = 0; k < counts[i]; ++k) {
      int m = k <= counts[i] / 2 ? k : k - counts[i];
      freq[i][k] = 2.0 * M_PI * m / L;
      amax = std::max(amax, std::abs(freq[i][k]));
    }
    ximax2 += amax * amax;
  }
  double ximax = std::sqrt(ximax2);

  d.spec_power_.resize(T);
  d.spec_xi2_.resize(T);
  {
    IndexIter it(counts);
    std::size_t k = 0;
    for (; !it.done(); it.next(), ++k) {
      double x2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double f = freq[i][it.idx()[i]];
        x2 += f * f;
      }
      d.spec_xi2_[k] = x2;
      d.spec_power_[k] = std::norm(spec[k]);
    }
  }

  d.levels_ = levels >= 0 ? levels : FilterBank::levels_for(ximax);
  d.telescoped_ = std::ldexp(1.0, d.levels_) >= ximax;

  auto bwd = plan_for(counts, FFTW_BACKWARD, in.data(), spec.data());
  std::vector<std::complex<double>> work(T), band(T);
  d.bands_.resize(d.levels_ + 1);
  for (int j = 0; j <= d.levels_; ++j) {
    for (std::size_t k = 0; k < T; ++k)
      work[k] = spec[k] * FilterBank::phi(j, std::sqrt(d.spec_xi2_[k]));
    run_plan(bwd, work.data(), band.data());
    auto& bj = d.bands_[j];
    bj.resize(T);
    const double inv = 1.0 / static_cast<double>(T);
    for (std::size_t k = 0; k < T; ++k) bj[k] = band[k].real() * inv;
  }

  double scale = g.box.cell_volume();
  for (int i = 0; i < n; ++i) scale /= std::sqrt(g.box.hi[i] - g.box.lo[i]);
  d.spec_scale_ = scale;
  return d;
}

double LpDecomposition::lp_norm(double s, double p, double q) const {
  if (!(p > 0.0) || std::isinf(p))
    throw std::invalid_argument("lp_norm: finite p > 0 required");
  if (!(q > 0.0)) throw std::invalid_argument("lp_norm: q > 0 required");
  const std::size_t T = bands_.empty() ? 0 : bands_[0].size();
  std::vector<double> acc(T, 0.0);
  if (q == 2.0) {
    for (int j = 0; j <= levels_; ++j) {
      double w2 = std::exp2(2.0 * j * s);
      const auto& u = bands_[j];
      for (std::size_t k = 0; k < T; ++k) acc[k] += w2 * u[k] * u[k];
    }
    for (std::size_t k = 0; k < T; ++k) acc[k] = std::sqrt(acc[k]);
  } else if (std::isinf(q)) {
    for (int j = 0; j <= levels_; ++j) {
      double w = std::exp2(j * s);
      const auto& u = bands_[j];
      for (std::size_t k = 0; k < T; ++k)
        acc[k] = std::max(acc[k], w * std::abs(u[k]));
    }
  } else {
    for (int j = 0; j <= levels_; ++j) {
      double w = std::exp2(j * s);
      const auto& u = bands_[j];
      for (std::size_t k = 0; k < T; ++k)
        acc[k] += std::pow(w * std::abs(u[k]), q);
    }
    for (std::size_t k = 0; k < T; ++k) acc[k] = std::pow(acc[k], 1.0 / q);
  }
  for (std::size_t k = 0; k < T; ++k) acc[k] = std::pow(acc[k], p);
  return std::pow(pairwise_sum(acc) * box_.cell_volume(), 1.0 / p);
}

double LpDecomposition::sobolev_norm(double s) const {
  std::vector<double> terms(spec_power_.size());
  for (std::size_t k = 0; k < terms.size(); ++k)
    terms[k] = std::pow(1.0 + spec_xi2_[k], s) * spec_power_[k];
  return spec_scale_ * std::sqrt(pairwise_sum(terms));
}

double LpDecomposition::band_l2(int j) const {
  const auto& u = bands_[j];
  std::vector<double> terms(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) terms[k] = u[k] * u[k];
  return std::sqrt(pairwise_sum(terms) * box_.cell_volume());
}

NormReport triebel_norm(const GridFunction& g, double s, double p, double q) {
  if (!std::isfinite(s)) throw std::invalid_argument("triebel_norm: s must be finite");
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("triebel_norm: p must lie in [1, inf)");
  if (!(q >= 1.0))
    throw std::invalid_argument(
        "triebel_norm: q below 1 is not supported; the quasi-norm range needs "
        "sigma_{p,q} moment corrections this quadrature does not implement");
  auto d = LpDecomposition::build(g);
  NormReport rep;
  rep.value = d.lp_norm(s, p, q);
  rep.method = "littlewood-paley";
  rep.s = s;
  rep.p = p;
  rep.q = q;
  rep.h = *std::max_element(g.box.h.begin(), g.box.h.end());
  if (p == 2.0 && q == 2.0) rep.cross_value = d.sobolev_norm(s);
  return rep;
}

NormReport triebel_norm(const GridFunction& g, const SmoothnessParams& sp) {
  return triebel_norm(g, sp.s, sp.p, sp.q);
}

double lp_norm_1d(std::span<const double> line, double h, double s, double p,
                  double q) {
  GridFunction g;
  g.box.lo = {0.0};
  g.box.hi = {static_cast<double>(line.size()) * h};
  g.box.h = {h};
  g.box.align = Alignment::CellCentered;
  g.values.assign(line.begin(), line.end());
  g.provenance = "line";
  g.inner_supported = true;  // caller vouches for decay toward the ends
  auto d = LpDecomposition::build(g);
  return d.lp_norm(s, p, q);
}

double fubini_axis_norm(const GridFunction& g, int axis, double s, double p) {
  auto counts = g.box.counts();
  int nline = counts[axis];
  std::size_t stride = 1;
  for (std::size_t i = axis + 1; i < counts.size(); ++i)
    stride *= static_cast<std::size_t>(counts[i]);

  double transverse_vol = 1.0;
  for (int i = 0; i < g.box.dim(); ++i)
    if (i != axis) transverse_vol *= g.box.h[i];

  std::vector<int> other;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (static_cast<int>(i) != axis) other.push_back(counts[i]);
  if (other.empty()) other.push_back(1);

  std::vector<double> line(nline);
  std::vector<double> terms;
  for (IndexIter it(other); !it.done(); it.next()) {
    std::size_t base = 0;
    int oi = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      int id = static_cast<int>(i) == axis ? 0 : it.idx()[oi++];
      base = base * static_cast<std::size_t>(counts[i]) +
             static_cast<std::size_t>(id);
    }
    for (int k = 0; k < nline; ++k) line[k] = g.values[base + k * stride];
    double v = lp_norm_1d(line, g.box.h[axis], s, p, p);
    terms.push_back(std::pow(v, p) * transverse_vol);
  }
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

}  // namespace planorm
