#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "planorm/lp.hpp"
#include "planorm/numeric.hpp"

using namespace planorm;

namespace {

GridFunction gauss2d(double h) {
  FieldExpr f{"gauss", [](std::span<const double> x) {
                return std::exp(-2.0 * (x[0] * x[0] + x[1] * x[1]));
              }};
  auto g = sample(f, GridBox::cube(2, 4.0, h));
  declare_inner_support(g);
  return g;
}

}  // namespace

TEST_CASE("filter bank telescopes exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    double t = uniform01(rng) * 100.0;
    int J = FilterBank::levels_for(t);
    double sum = 0.0;
    for (int j = 0; j <= J; ++j) sum += FilterBank::phi(j, t);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    // partial sums reproduce the rescaled cutoff
    double partial = 0.0;
    for (int j = 0; j <= 3; ++j) partial += FilterBank::phi(j, t);
    CHECK(partial == doctest::Approx(FilterBank::chi(std::ldexp(t, -3)))
                         .epsilon(1e-14));
  }
  CHECK(FilterBank::levels_for(8.0) == 3);
  CHECK(FilterBank::levels_for(8.01) == 4);
  CHECK(FilterBank::levels_for(1.0) == 0);
  CHECK(FilterBank::levels_for(0.0) == 0);
  CHECK(FilterBank::phi(0, 0.5) == 1.0);
  CHECK(FilterBank::phi(2, 0.5) == 0.0);
}

TEST_CASE("bank factory and vector multipliers") {
  CHECK_THROWS(lp_filterbank(0, 4));
  CHECK_THROWS(lp_filterbank(2, 1));
  auto bank = lp_filterbank(2, 5);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    // random frequency inside the represented ball |xi| <= 2^top
    double r = uniform01(rng) * 32.0;
    double th = uniform01(rng) * 2.0 * M_PI;
    std::vector<double> xi{r * std::cos(th), r * std::sin(th)};
    double sum = 0.0;
    for (int j = 0; j <= bank.top; ++j) sum += bank.multiplier(j, xi);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }

  // ring supports and dyadic dilation
  for (double t : {0.1, 1.0, 1.9, 2.0, 3.0, 8.0, 9.0}) {
    std::vector<double> xi{t, 0.0};
    double v = bank.multiplier(2, xi);
    if (t < 2.0 || t > 8.0)
      CHECK(v == 0.0);
    else
      CHECK(v >= 0.0);
    std::vector<double> half{t / 2.0, 0.0};
    CHECK(bank.multiplier(3, xi) == doctest::Approx(bank.multiplier(2, half)));
  }
  CHECK(bank.multiplier(2, std::vector<double>{3.0, 0.0}) > 0.0);
  CHECK_THROWS(bank.multiplier(1, std::vector<double>{1.0}));
  CHECK_THROWS(bank.multiplier(9, std::vector<double>{1.0, 0.0}));
}

TEST_CASE("bands reconstruct the samples") {
  auto g = gauss2d(1.0 / 16);
  auto d = LpDecomposition::build(g);
  CHECK(d.telescoped());
  std::vector<double> recon(g.values.size(), 0.0);
  for (int j = 0; j <= d.levels(); ++j)
    for (std::size_t k = 0; k < recon.size(); ++k) recon[k] += d.band(j)[k];
  double emax = 0.0;
  for (std::size_t k = 0; k < recon.size(); ++k)
    emax = std::max(emax, std::abs(recon[k] - g.values[k]));
  CHECK(emax < 1e-12);
}

TEST_CASE("spectral route at s=0 is the midpoint L2 norm") {
  auto g = gauss2d(1.0 / 16);
  auto d = LpDecomposition::build(g);
  CHECK(d.sobolev_norm(0.0) ==
        doctest::Approx(plain_lp_norm(g, 2)).epsilon(1e-13));
}

TEST_CASE("pure oscillation lands in one band") {
  GridFunction g;
  g.box = GridBox::cell_centered({-M_PI}, {M_PI}, 2.0 * M_PI / 64);
  g.values.resize(64);
  for (int k = 0; k < 64; ++k)
    g.values[k] = std::cos(16.0 * g.box.coord(0, k));
  g.provenance = "cos16";
  g.inner_supported = true;  // periodic probe, wrapping is the point
  auto d = LpDecomposition::build(g);
  REQUIRE(d.levels() >= 5);
  double total = plain_lp_norm(g, 2);
  CHECK(d.band_l2(4) == doctest::Approx(total).epsilon(1e-12));
  for (int j = 0; j <= d.levels(); ++j)
    if (j != 4) CHECK(d.band_l2(j) < 1e-12 * total + 1e-12);
}

TEST_CASE("band route brackets the spectral route") {
  auto g = gauss2d(1.0 / 32);
  auto d = LpDecomposition::build(g);
  for (double s : {0.5, 1.0, 1.5}) {
    double band = d.lp_norm(s, 2, 2);
    double spec = d.sobolev_norm(s);
    CHECK(band / spec > 0.2);
    CHECK(band / spec < 5.0);
  }
}

TEST_CASE("norm decreases as q grows") {
  auto g = gauss2d(1.0 / 32);
  auto d = LpDecomposition::build(g);
  double inf = std::numeric_limits<double>::infinity();
  double n1 = d.lp_norm(1.0, 2, 1);
  double n2 = d.lp_norm(1.0, 2, 2);
  double n4 = d.lp_norm(1.0, 2, 4);
  double ni = d.lp_norm(1.0, 2, inf);
  CHECK(n1 >= n2);
  CHECK(n2 >= n4);
  CHECK(n4 >= ni);
  CHECK(ni > 0.0);
}

TEST_CASE("validating wrapper") {
  auto g = gauss2d(1.0 / 16);
  CHECK_THROWS_WITH_AS(triebel_norm(g, 1.0, 2.0, 0.5),
                       doctest::Contains("sigma"), std::invalid_argument);
  CHECK_THROWS(triebel_norm(g, 1.0, 0.5, 2.0));

  // s = 0 collapses to (nearly) the plain L2 norm once the spectrum sits
  // mostly under the low-pass plateau; a wide bump does that.
  FieldExpr wide{"wide-gauss", [](std::span<const double> x) {
                   return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 6.0);
                 }};
  auto gw = sample(wide, GridBox::cube(2, 16.0, 0.25));
  declare_inner_support(gw);
  auto flat = triebel_norm(gw, 0.0, 2.0, 2.0);
  CHECK(flat.value == doctest::Approx(plain_lp_norm(gw, 2)).epsilon(0.02));
  auto rep = triebel_norm(g, 1.0, 2.0, 2.0);
  CHECK(rep.value > 0.0);
  REQUIRE(rep.cross_value.has_value());
  CHECK(*rep.cross_value == doctest::Approx(LpDecomposition::build(g).sobolev_norm(1.0)));

  GridFunction raw = g;
  raw.inner_supported = false;
  CHECK_THROWS(LpDecomposition::build(raw));
}

TEST_CASE("decomposition is deterministic") {
  auto a = LpDecomposition::build(gauss2d(1.0 / 16));
  auto b = LpDecomposition::build(gauss2d(1.0 / 16));
  REQUIRE(a.levels() == b.levels());
  for (int j = 0; j <= a.levels(); ++j) CHECK(a.band(j) == b.band(j));
  CHECK(a.lp_norm(0.75, 2, 2) == b.lp_norm(0.75, 2, 2));
}

TEST_CASE("line norms") {
  std::vector<double> line(128);
  double h = 1.0 / 16;
  for (int k = 0; k < 128; ++k) {
    double x = (k + 0.5) * h - 4.0;
    line[k] = std::exp(-2.0 * x * x);
  }
  double v = lp_norm_1d(line, h, 0.5, 2, 2);
  CHECK(v > 0.0);

  auto g = gauss2d(1.0 / 16);
  double f0 = fubini_axis_norm(g, 0, 0.5, 2);
  double f1 = fubini_axis_norm(g, 1, 0.5, 2);
  CHECK(f0 > 0.0);
  // the sample is symmetric in its axes
  CHECK(f0 == doctest::Approx(f1).epsilon(1e-12));
}
