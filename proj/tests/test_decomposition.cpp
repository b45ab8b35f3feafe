#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "planorm/corpus.hpp"
#include "planorm/decomposition.hpp"

using namespace planorm;

namespace {

SmoothnessParams params21(double s) {
  SmoothnessParams sp;
  sp.s = s;
  sp.p = 2.0;
  sp.q = 2.0;
  sp.split = PlaneSplit{2, 1};
  return sp;
}

const CorpusEntry& entry(const std::string& id) {
  for (const auto& e : builtin_corpus())
    if (e.id == id) return e;
  throw std::runtime_error("no corpus entry " + id);
}

std::vector<CorpusEntry> pick(std::initializer_list<const char*> ids) {
  std::vector<CorpusEntry> out;
  for (const char* id : ids) out.push_back(entry(id));
  return out;
}

// the dichotomy the verdicts must reproduce: localized membership equals
// reinforced membership plus vanishing traces through the inspected order
bool law_holds(const MembershipReport& rep) {
  int m = rep.cls.critical ? rep.cls.r - 1 : rep.cls.r;
  return rep.in_rloc == (rep.in_reinforced && rep.traces_vanish_through(m));
}

const ExperimentRecord& find_rec(const std::vector<ExperimentRecord>& recs,
                                 const std::string& id, const std::string& kind,
                                 const std::string& note_part = "") {
  for (const auto& r : recs)
    if (r.entry == id && r.kind == kind &&
        (note_part.empty() || r.note.find(note_part) != std::string::npos))
      return r;
  throw std::runtime_error("no record " + id + "/" + kind + "/" + note_part);
}

}  // namespace

TEST_CASE("membership verdicts are frozen on representative cells") {
  // smooth even profile below the weighted threshold: member everywhere
  auto g25 = membership_report(entry("gaussian"), params21(0.25));
  CHECK_FALSE(g25.cls.critical);
  CHECK(g25.cls.r == -1);
  CHECK(g25.traces_checked == -1);
  CHECK(g25.in_F);
  CHECK(g25.f_norm == doctest::Approx(0.927790773723).epsilon(1e-6));
  CHECK(std::abs(g25.f_refine_delta) < 1e-10);
  CHECK(g25.in_reinforced);
  CHECK(g25.reinforced_total == doctest::Approx(0.927790773723).epsilon(1e-6));
  CHECK_FALSE(g25.reinforced_divergent);
  CHECK(g25.in_rloc);
  CHECK(g25.rloc_value == doctest::Approx(2.39003569152).epsilon(1e-6));
  CHECK_FALSE(g25.rloc_flag_coarse);
  CHECK_FALSE(g25.rloc_flag_fine);
  CHECK(g25.consistent_with_theorem);
  CHECK(law_holds(g25));

  // same profile on the zero-order critical line: both routes must expel it,
  // and each divergence flag must reproduce at the second resolution pair
  auto g50 = membership_report(entry("gaussian"), params21(0.5));
  CHECK(g50.cls.critical);
  CHECK(g50.cls.r == 0);
  CHECK(g50.in_F);
  CHECK(g50.f_norm == doctest::Approx(1.08000329841).epsilon(1e-6));
  CHECK_FALSE(g50.in_reinforced);
  CHECK(g50.reinforced_divergent);
  CHECK(g50.reinforced_total == doctest::Approx(3.85283181978).epsilon(1e-6));
  CHECK_FALSE(g50.in_rloc);
  CHECK(g50.rloc_flag_coarse);
  CHECK(g50.rloc_flag_fine);
  CHECK(g50.consistent_with_theorem);
  CHECK(law_holds(g50));

  // odd profile, r = 1: order-0 trace vanishes, order-1 survives, excluded
  auto o175 = membership_report(entry("odd"), params21(1.75));
  REQUIRE(o175.traces_checked == 1);
  REQUIRE(o175.trace_vanishes.size() == 2);
  CHECK(o175.trace_vanishes[0]);
  CHECK_FALSE(o175.trace_vanishes[1]);
  CHECK(o175.min_surviving_trace == doctest::Approx(0.968688925607).epsilon(1e-6));
  CHECK(o175.in_F);
  CHECK(o175.f_norm == doctest::Approx(2.04426716691).epsilon(1e-6));
  CHECK(o175.in_reinforced);
  CHECK_FALSE(o175.in_rloc);
  CHECK(o175.traces_vanish_through(0));
  CHECK_FALSE(o175.traces_vanish_through(1));
  CHECK(o175.consistent_with_theorem);
  CHECK(law_holds(o175));

  // order-2 vanishing on the r = 1 critical line: member on both routes
  auto sq15 = membership_report(entry("square"), params21(1.5));
  CHECK(sq15.cls.critical);
  CHECK(sq15.cls.r == 1);
  CHECK(sq15.traces_checked == 0);
  REQUIRE(sq15.trace_vanishes.size() == 1);
  CHECK(sq15.trace_vanishes[0]);
  CHECK(sq15.f_norm == doctest::Approx(0.856117088482).epsilon(1e-6));
  CHECK(sq15.in_reinforced);
  CHECK(sq15.reinforced_total == doctest::Approx(1.45779449265).epsilon(1e-6));
  CHECK(sq15.in_rloc);
  CHECK(sq15.rloc_value == doctest::Approx(1.32863132178).epsilon(1e-6));
  CHECK(sq15.consistent_with_theorem);
  CHECK(law_holds(sq15));

  // order-3 vanishing passes the r = 2 critical line; the order-1 trace is
  // spectral-derivative noise well under the tolerance
  auto cu25 = membership_report(entry("cubic"), params21(2.5));
  CHECK(cu25.cls.r == 2);
  CHECK(cu25.traces_checked == 1);
  CHECK(cu25.traces_vanish_through(1));
  CHECK(cu25.max_vanishing_trace < 1e-4);
  CHECK(cu25.in_reinforced);
  CHECK(cu25.reinforced_total == doctest::Approx(4.32901796657).epsilon(1e-6));
  CHECK(cu25.in_rloc);
  CHECK(cu25.rloc_value == doctest::Approx(3.40249636939).epsilon(1e-6));
  CHECK(cu25.consistent_with_theorem);
  CHECK(law_holds(cu25));

  // support grazing the collar through a thin smooth sliver: stays a member
  // on the zero-order critical line, the transient refinement growth of the
  // sliver mass must not read as divergence
  auto os50 = membership_report(entry("offplane-shift"), params21(0.5));
  CHECK(os50.cls.critical);
  CHECK(os50.in_F);
  CHECK(os50.f_norm == doctest::Approx(0.233209458779).epsilon(1e-6));
  CHECK_FALSE(os50.reinforced_divergent);
  CHECK(os50.in_reinforced);
  CHECK(os50.in_rloc);
  CHECK(os50.rloc_value == doctest::Approx(0.33648007162).epsilon(1e-6));
  CHECK(os50.consistent_with_theorem);
  CHECK(law_holds(os50));

  // a surviving trace keeps its verdict when the tolerance moves a decade
  auto g175 = membership_report(entry("gaussian"), params21(1.75));
  CHECK(g175.max_vanishing_trace < 1e-10);
  CHECK(g175.min_surviving_trace == doctest::Approx(1.56354289083).epsilon(1e-6));
  MembershipOptions tighter;
  tighter.trace_tol = 1e-4;
  auto g175t = membership_report(entry("gaussian"), params21(1.75), tighter);
  CHECK(g175t.in_F == g175.in_F);
  CHECK(g175t.in_rloc == g175.in_rloc);
  CHECK(g175t.in_reinforced == g175.in_reinforced);
  CHECK(g175t.trace_vanishes == g175.trace_vanishes);
  CHECK(g175t.consistent_with_theorem);

  auto cu25t = membership_report(entry("cubic"), params21(2.5), tighter);
  CHECK(cu25t.in_rloc == cu25.in_rloc);
  CHECK(cu25t.trace_vanishes == cu25.trace_vanishes);
  CHECK(cu25t.consistent_with_theorem);
}

TEST_CASE("noncritical dilation family brackets the weighted quotient") {
  auto sub = pick({"gaussian", "odd", "square", "offplane-shift"});
  auto recs = run_noncritical_experiment(sub, params21(0.75));
  // 1 excluded record + 3 entries x (4 dilates + bracket)
  REQUIRE(recs.size() == 16);

  // surviving order-0 trace: the weighted term grows under refinement on
  // both pairs
  const auto& ex = find_rec(recs, "gaussian", "noncritical-excluded");
  CHECK(ex.value == doctest::Approx(6.44205).epsilon(1e-4));
  CHECK(ex.value_half == doctest::Approx(7.8319).epsilon(1e-4));
  CHECK(ex.rel_delta > 0.05);
  CHECK(ex.flagged);
  CHECK(ex.note.find("second pair delta") != std::string::npos);

  for (const auto& r : recs) {
    CHECK_FALSE(r.cls.critical);
    CHECK(r.cls.r == 0);
    if (r.kind == "noncritical-quotient") CHECK_FALSE(r.flagged);
    if (r.kind == "dilation-bracket") {
      CHECK(r.value >= 1.0);
      CHECK(r.value <= 4.0);
      CHECK_FALSE(r.flagged);
    }
  }

  CHECK(find_rec(recs, "odd", "dilation-bracket").value ==
        doctest::Approx(1.17016).epsilon(1e-4));
  CHECK(find_rec(recs, "square", "dilation-bracket").value ==
        doctest::Approx(1.7505).epsilon(1e-4));

  // the grazing sliver: its undilated quotient is still filling in (growth
  // decelerating at the convergent rate, so unflagged) and its negligible
  // collar mass stays out of the bracket
  const auto& k0 = find_rec(recs, "offplane-shift", "noncritical-quotient",
                            "dilate k=0");
  CHECK(k0.value == doctest::Approx(0.00385155).epsilon(1e-3));
  CHECK(k0.value_half == doctest::Approx(0.00579445).epsilon(1e-3));
  CHECK(k0.rel_delta > 0.4);
  CHECK_FALSE(k0.flagged);
  const auto& obr = find_rec(recs, "offplane-shift", "dilation-bracket");
  CHECK(obr.value == doctest::Approx(1.05766).epsilon(1e-4));
  CHECK_FALSE(obr.flagged);
  CHECK(obr.note.find("3 of 4 dilates") != std::string::npos);
}

TEST_CASE("critical chain quotients and strict-inclusion records") {
  auto sub = pick({"gaussian", "odd", "square", "offplane-shift"});
  auto recs = run_critical_experiment(sub, params21(1.5));
  // gaussian excluded, odd gap witness, two chain families with brackets
  REQUIRE(recs.size() == 12);

  const auto& ex = find_rec(recs, "gaussian", "excluded-by-trace");
  CHECK(ex.note.find("surviving trace at order 0") != std::string::npos);

  // order-1 vanishing exactly misses the r = 1 chain: the collar term blows
  // up, which is the strict-inclusion witness
  const auto& gap = find_rec(recs, "odd", "rinf-gap");
  CHECK(gap.value == doctest::Approx(2.60794).epsilon(1e-4));
  CHECK(gap.value_half == doctest::Approx(2.83384).epsilon(1e-4));
  CHECK(gap.rel_delta > 0.05);
  CHECK(gap.flagged);
  CHECK(gap.note.find("grows under refinement") != std::string::npos);

  for (const auto& r : recs) {
    CHECK(r.cls.critical);
    CHECK(r.cls.r == 1);
    if (r.kind == "critical-chain") CHECK_FALSE(r.flagged);
    if (r.kind == "dilation-bracket") {
      CHECK(r.value <= 4.0);
      CHECK_FALSE(r.flagged);
    }
  }

  CHECK(find_rec(recs, "square", "dilation-bracket").value ==
        doctest::Approx(1.18104).epsilon(1e-4));

  const auto& k0 = find_rec(recs, "offplane-shift", "critical-chain",
                            "dilate k=0");
  CHECK(k0.value == doctest::Approx(0.017862).epsilon(1e-3));
  CHECK(k0.value_half == doctest::Approx(0.0243595).epsilon(1e-3));
  CHECK_FALSE(k0.flagged);
  const auto& obr = find_rec(recs, "offplane-shift", "dilation-bracket");
  CHECK(obr.value == doctest::Approx(1.25218).epsilon(1e-4));
  CHECK_FALSE(obr.flagged);
  CHECK(obr.note.find("3 of 4 dilates") != std::string::npos);
}

TEST_CASE("collar mass of the unit plateau grows like log(1/h)") {
  const double hs[] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  auto rec = reinforced_divergence_probe(params21(0.5), hs);

  REQUIRE(rec.values.size() == 3);
  CHECK(rec.values[0] == doctest::Approx(7.16709578089).epsilon(1e-6));
  CHECK(rec.values[1] == doctest::Approx(8.3948046251).epsilon(1e-6));
  CHECK(rec.values[2] == doctest::Approx(9.6231598151).epsilon(1e-6));
  // near-equal increments per halving are the log signature
  REQUIRE(rec.deltas.size() == 2);
  CHECK(rec.deltas[0] == doctest::Approx(1.22770884422).epsilon(1e-5));
  CHECK(rec.deltas[1] == doctest::Approx(1.22835519).epsilon(1e-5));

  CHECK(rec.fit_c == doctest::Approx(1.7716757011).epsilon(1e-6));
  CHECK(rec.fit_b == doctest::Approx(2.2548599882).epsilon(1e-6));
  CHECK(rec.rel_residual < 1e-4);
  CHECK(rec.log_divergent);
  CHECK(rec.note.find("fit") != std::string::npos);

  // the vanishing control converges: deltas shrink by 1.5x or better
  REQUIRE(rec.control_values.size() == 3);
  CHECK(rec.control_values[0] == doctest::Approx(0.140446453504).epsilon(1e-6));
  REQUIRE(rec.control_deltas.size() == 2);
  CHECK(std::abs(rec.control_deltas[1]) * 1.5 <=
        std::abs(rec.control_deltas[0]));
  CHECK(rec.control_converges);
}

TEST_CASE("runners reject parameters from the wrong class") {
  const auto& corpus = builtin_corpus();
  const double hs3[] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  const double hs2[] = {1.0 / 16, 1.0 / 32};
  const double hs_bad[] = {1.0 / 16, 1.0 / 32, 1.0 / 32};

  CHECK_THROWS_WITH_AS(run_noncritical_experiment(corpus, params21(1.5)),
                       doctest::Contains("critical"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(run_critical_experiment(corpus, params21(0.75)),
                       doctest::Contains("critical"), std::invalid_argument);

  CHECK_THROWS_AS(reinforced_divergence_probe(params21(0.75), hs3),
                  std::invalid_argument);
  // r = 1 critical line has no zero-order plateau probe either
  CHECK_THROWS_AS(reinforced_divergence_probe(params21(1.5), hs3),
                  std::invalid_argument);
  CHECK_THROWS_AS(reinforced_divergence_probe(params21(0.5), hs2),
                  std::invalid_argument);
  CHECK_THROWS_AS(reinforced_divergence_probe(params21(0.5), hs_bad),
                  std::invalid_argument);

  SmoothnessParams wrong = params21(0.5);
  wrong.split = PlaneSplit{3, 1};
  CHECK_THROWS_WITH_AS(membership_report(entry("gaussian"), wrong),
                       doctest::Contains("split"), std::invalid_argument);
}
