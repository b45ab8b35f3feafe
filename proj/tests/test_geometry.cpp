#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "planorm/geometry.hpp"
#include "planorm/numeric.hpp"

using namespace planorm;

TEST_CASE("glue step endpoints and symmetry") {
  CHECK(glue_step(-1.0) == 0.0);
  CHECK(glue_step(0.0) == 0.0);
  CHECK(glue_step(1.0) == 1.0);
  CHECK(glue_step(2.0) == 1.0);
  CHECK(glue_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double t : {0.1, 0.25, 0.4}) {
    CHECK(glue_step(t) + glue_step(1.0 - t) == doctest::Approx(1.0));
    CHECK(glue_step(t) > 0.0);
    CHECK(glue_step(t) < glue_step(t + 0.05));
  }
}

TEST_CASE("cutoff_high plateaus") {
  CHECK(cutoff_high(0.0, 1, 2) == 1.0);
  CHECK(cutoff_high(1.0, 1, 2) == 1.0);
  CHECK(cutoff_high(2.0, 1, 2) == 0.0);
  CHECK(cutoff_high(5.0, 1, 2) == 0.0);
  CHECK(cutoff_high(1.5, 1, 2) == doctest::Approx(0.5));
  // monotone on the ramp
  double prev = 1.0;
  for (double t = 1.0; t <= 2.0; t += 1.0 / 64) {
    double v = cutoff_high(t, 1, 2);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("pairwise_sum matches naive") {
  std::mt19937_64 rng(7);
  std::vector<double> v(1000);
  double naive = 0.0;
  for (auto& x : v) {
    x = uniform01(rng) - 0.5;
    naive += x;
  }
  CHECK(pairwise_sum(v) == doctest::Approx(naive).epsilon(1e-12));
  CHECK(pairwise_sum({}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{3.25}) == 3.25);
}

TEST_CASE("uniform01 range and determinism") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    double x = uniform01(a);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == uniform01(b));
  }
}

TEST_CASE("floor_div") {
  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(-8, 2) == -4);
  CHECK(floor_div(8, 2) == 4);
  CHECK(floor_div(0, 2) == 0);
  CHECK(floor_div(-1, 4) == -1);
}

TEST_CASE("IndexIter row-major order") {
  IndexIter it({2, 3});
  std::vector<std::vector<int>> seen;
  for (; !it.done(); it.next())
    seen.emplace_back(it.idx().begin(), it.idx().end());
  REQUIRE(seen.size() == 6);
  CHECK(seen.front() == std::vector<int>{0, 0});
  CHECK(seen[1] == std::vector<int>{0, 1});
  CHECK(seen[3] == std::vector<int>{1, 0});
  CHECK(seen.back() == std::vector<int>{1, 2});
}

TEST_CASE("plane split basics") {
  PlaneSplit s{2, 1};
  s.validate();
  CHECK(s.codim() == 1);
  CHECK_FALSE(s.perpendicular_axis(0));
  CHECK(s.perpendicular_axis(1));
  CHECK_THROWS(PlaneSplit{2, 2}.validate());
  CHECK_THROWS(PlaneSplit{0, 0}.validate());
  PlaneSplit point{3, 0};
  point.validate();
  CHECK(point.codim() == 3);
}

TEST_CASE("perpendicular multi-indices") {
  auto one = perpendicular_indices(PlaneSplit{2, 1}, 2);
  REQUIRE(one.size() == 1);
  CHECK(one[0].entries == std::vector<int>{0, 2});

  auto three = perpendicular_indices(PlaneSplit{3, 1}, 2);
  CHECK(three.size() == 3);
  for (const auto& a : three) {
    CHECK(a.order() == 2);
    CHECK(a.entries[0] == 0);
    CHECK(a.perpendicular(1));
  }
  auto zero = perpendicular_indices(PlaneSplit{3, 1}, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].order() == 0);
}

TEST_CASE("rational parsing") {
  auto r = Rational::parse("3/4");
  REQUIRE(r);
  CHECK(r->num == 3);
  CHECK(r->den == 4);
  auto d = Rational::parse("0.75");
  REQUIRE(d);
  CHECK(d->num == 3);
  CHECK(d->den == 4);
  auto i = Rational::parse("2");
  REQUIRE(i);
  CHECK(i->num == 2);
  CHECK(i->den == 1);
  CHECK(Rational::parse("6/8")->num == 3);
  CHECK_FALSE(Rational::parse("abc"));
  CHECK_FALSE(Rational::parse("1/0"));
  CHECK(Rational{3, 4}.value() == 0.75);
}

static CriticalityClass classify(double s, double p, int n, int l) {
  SmoothnessParams sp;
  sp.s = s;
  sp.p = p;
  sp.q = p;
  sp.split = PlaneSplit{n, l};
  return classify_criticality(sp);
}

TEST_CASE("criticality classification") {
  auto c = classify(1.5, 2, 2, 1);  // s - (n-l)/p = 1
  CHECK(c.critical);
  CHECK(c.r == 1);

  c = classify(0.5, 2, 2, 1);  // 0
  CHECK(c.critical);
  CHECK(c.r == 0);

  c = classify(2.5, 2, 2, 1);  // 2
  CHECK(c.critical);
  CHECK(c.r == 2);

  c = classify(0.25, 2, 2, 1);  // -1/4
  CHECK_FALSE(c.critical);
  CHECK(c.r == -1);

  c = classify(0.75, 2, 2, 1);  // 1/4
  CHECK_FALSE(c.critical);
  CHECK(c.r == 0);

  c = classify(1.75, 2, 2, 1);  // 5/4
  CHECK_FALSE(c.critical);
  CHECK(c.r == 1);

  c = classify(0.5, 1, 3, 1);  // 1/2 - 2 = -3/2, clamped
  CHECK_FALSE(c.critical);
  CHECK(c.r == -1);

  c = classify(1.0, 2, 3, 1);  // 1 - 1 = 0
  CHECK(c.critical);
  CHECK(c.r == 0);
}

TEST_CASE("criticality exact rational path") {
  SmoothnessParams sp;
  sp.split = PlaneSplit{2, 1};
  sp.q = 2;
  sp.s_exact = Rational{1, 2};
  sp.p_exact = Rational{2, 1};
  sp.s = 0.5;
  sp.p = 2;
  auto c = classify_criticality(sp);
  CHECK(c.critical);
  CHECK(c.r == 0);

  // 1/3 - 1/3: critical at r = 0 despite both being non-dyadic
  sp.s_exact = Rational{1, 3};
  sp.p_exact = Rational{3, 1};
  sp.s = 1.0 / 3.0;
  sp.p = 3.0;
  c = classify_criticality(sp);
  CHECK(c.critical);
  CHECK(c.r == 0);

  sp.s_exact = Rational{2, 3};
  c = classify_criticality(sp);
  CHECK_FALSE(c.critical);
  CHECK(c.r == 0);
}

TEST_CASE("smoothness constants") {
  auto c = smoothness_constants(1.5, 2, 2, 2);
  CHECK(c.sigma_p == 0.0);
  CHECK(c.sigma_pq == 0.0);
  CHECK(c.floor_s == 1);
  CHECK(c.frac_s == 0.5);
  CHECK(c.p_conj == 2.0);

  c = smoothness_constants(2.0, 0.5, 2, 2);
  CHECK(c.sigma_p == doctest::Approx(2.0));
  CHECK(c.floor_s == 1);
  CHECK(c.frac_s == 1.0);  // fractional part lives in (0, 1]

  c = smoothness_constants(0.75, 2, 0.5, 3);
  CHECK(c.sigma_p == 0.0);
  CHECK(c.sigma_pq == doctest::Approx(3.0));

  CHECK(std::isinf(smoothness_constants(1, 1, 1, 2).p_conj));
  CHECK(smoothness_constants(1, 4.0 / 3.0, 1, 2).p_conj == doctest::Approx(4.0));
}

TEST_CASE("distance weights") {
  PlaneSplit s{2, 1};
  auto w = distance_weights(std::vector<double>{1.0, 0.3}, s, 0.5);
  CHECK(w.d == doctest::Approx(0.3));
  CHECK(w.delta == doctest::Approx(0.3));
  CHECK(w.in_collar);

  w = distance_weights(std::vector<double>{0.2, 0.8}, s, 0.5);
  CHECK_FALSE(w.in_collar);

  w = distance_weights(std::vector<double>{5.0, 2.0}, s, 0.5);
  CHECK(w.d == doctest::Approx(2.0));
  CHECK(w.delta == 1.0);

  PlaneSplit pt{2, 0};
  w = distance_weights(std::vector<double>{3.0, 4.0}, pt, 0.5);
  CHECK(w.d == doctest::Approx(5.0));
}

TEST_CASE("params validation") {
  SmoothnessParams sp;
  sp.s = 1.0;
  sp.p = 2.0;
  sp.q = 2.0;
  sp.split = PlaneSplit{2, 1};
  CHECK_NOTHROW(sp.validate());
  sp.p = 0.5;
  CHECK_THROWS(sp.validate());
  sp.p = 2;
  sp.s = 0;
  CHECK_THROWS(sp.validate());
  sp.s = 1;
  sp.eps = 1.5;
  CHECK_THROWS(sp.validate());
}
