#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/inequalities.hpp"
#include "oracles.hpp"

using namespace bfa;

TEST_CASE("moments and norms") {
  const RealTable f = RealTable::from_function(3, [](Mask x) { return static_cast<double>(x) - 3.0; });
  const oracle::Values v(f.values().begin(), f.values().end());
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    CHECK(moment(f, p) == doctest::Approx(oracle::moment(v, p)).epsilon(1e-12));
    CHECK(norm(f, p) == doctest::Approx(std::pow(oracle::moment(v, p), 1.0 / p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(norm(f, 0.5), DomainError);
}

TEST_CASE("indicator") {
  const RealTable ind = indicator_of(make_family("and:2"));
  CHECK(ind[3] == 1.0);
  CHECK(ind[0] == 0.0);
}

TEST_CASE("bonami") {
  // x1 x2 + x3 x4: E f^4 = 4 + 2*... computed directly
  const RealTable f = RealTable::from_function(4, [](Mask x) { return chi(0b0011, x) + chi(0b1100, x); });
  const InequalityReport r = bonami_check(f, 2);
  CHECK(r.lhs == doctest::Approx(oracle::moment({f.values().begin(), f.values().end()}, 4.0)));
  CHECK(r.rhs == doctest::Approx(81.0 * 4.0));
  CHECK(r.holds);
  CHECK_THROWS_AS(bonami_check(f, 1), DomainError);
  const MultilinearPoly q(3, {{0b111, 1.0}});
  CHECK(bonami_check(q, 3).lhs == doctest::Approx(1.0));
}

TEST_CASE("bonami on a degree-1 sum") {
  const RealTable f = RealTable::from_function(3, [](Mask x) { return chi(1, x) + chi(2, x) + chi(4, x); });
  const InequalityReport r = bonami_check(f, 1);
  CHECK(r.lhs == doctest::Approx(21.0));
  CHECK(r.rhs == doctest::Approx(81.0));
}

TEST_CASE("poincare equality cases") {
  // equality exactly when all weight sits on levels 0 and 1: constants and signed dictators
  for (std::uint64_t bits = 0; bits < 256; ++bits) {
    const TruthTable f = TruthTable::from_words(3, {bits});
    const SpectralSummary s = summary(wht(f));
    const bool low = s.level_weights[0] + s.level_weights[1] > 1.0 - 1e-12;
    CHECK((std::abs(poincare_check(f).margin) < 1e-12) == low);
  }
}

TEST_CASE("hypercontractivity") {
  const RealTable f = to_real(random_table(5, 6));
  const InequalityReport r = hypercontractivity_check(f, 2.0, 4.0, 1.0 / std::sqrt(3.0));
  CHECK(r.holds);
  CHECK(r.margin == doctest::Approx(r.rhs - r.lhs));
  CHECK(hypercontractivity_corollary_check(f).holds);
  CHECK_THROWS_AS(hypercontractivity_check(f, 2.0, 4.0, 0.9), DomainError);
  CHECK_THROWS_AS(hypercontractivity_check(f, 3.0, 2.0, 0.1), DomainError);
  // beyond the admissible rho the inequality can fail; the unchecked norms expose it
  const RealTable d = RealTable::from_function(1, [](Mask x) { return x ? 0.0 : 1.0; });
  const auto [lhs, rhs] = hypercontractivity_norms(d, 2.0, 4.0, 1.0);
  CHECK(lhs > rhs);
}

TEST_CASE("small-set expansion") {
  const RealTable ind = indicator_of(make_family("and:4"));
  const InequalityReport r = sse_check(ind, 1.0 / 3.0);
  CHECK(r.asserted);
  CHECK(r.holds);
  CHECK(r.rhs == doctest::Approx(std::pow(1.0 / 16.0, 1.5)));
  CHECK_FALSE(sse_check(ind, 0.5).asserted);
  CHECK_THROWS_AS(sse_check(to_real(majority(3)), 0.3), DomainError);
}

TEST_CASE("kkl, level-1, poincare, edge isoperimetry") {
  const InequalityReport k = kkl_check(dictator(1, 4));
  CHECK(k.lhs == doctest::Approx(3.0 / 9.0));
  CHECK(k.rhs == doctest::Approx(1.0));
  CHECK_THROWS_AS(kkl_check(make_family("and:3")), DomainError);

  const InequalityReport l = level1_check(indicator_of(make_family("and:4")));
  CHECK(l.asserted);
  CHECK(l.holds);
  // alpha = 3/4 lies above e^{-1/2}
  CHECK_FALSE(level1_check(indicator_of(make_family("or:2"))).asserted);

  // Poincare is tight for dictators, edge isoperimetry for subcubes
  const InequalityReport p = poincare_check(dictator(2, 3));
  CHECK(p.margin == doctest::Approx(0.0).scale(1));
  const InequalityReport e = edge_isoperimetry_check(make_family("and:2"));
  CHECK(e.lhs == doctest::Approx(1.0));
  CHECK(e.rhs == doctest::Approx(1.0));
}

TEST_CASE("2/pi and majority is stablest on majority") {
  const InequalityReport t = two_pi_majority(101);
  CHECK(t.holds);
  CHECK_FALSE(two_pi_majority(3).holds);
  CHECK(two_pi_check(majority_spectrum(101), 0.1).asserted == false);
  for (double rho : {1.0 / 3.0, 1.0 / std::sqrt(2.0)}) CHECK(mist_majority(101, rho).holds);
  const InequalityReport m = mist_check(wht(majority(9)), 0.5, 0.5);
  CHECK_FALSE(m.asserted);
}

TEST_CASE("suites") {
  for (const auto& name : suite_names()) {
    SuiteConfig cfg;
    cfg.suite = name;
    cfg.n = 3;
    cfg.count = 20;
    if (name == "hyper") cfg.n = 6;
    const SuiteResult r = run_suite(cfg);
    CHECK(r.violations == 0);
    CHECK_FALSE(r.rows.empty());
  }
  SuiteConfig bad;
  bad.suite = "sse";
  bad.n = 5;
  CHECK_THROWS_AS(run_suite(bad), CapacityError);
  bad.suite = "nope";
  bad.n = 2;
  CHECK_THROWS_AS(run_suite(bad), DomainError);
}

TEST_CASE("suite tsv") {
  SuiteConfig cfg;
  cfg.suite = "poincare";
  cfg.n = 1;
  std::ostringstream out;
  write_tsv(out, run_suite(cfg).rows);
  const std::string text = out.str();
  CHECK(text.rfind("function\tinequality\tlhs\trhs\tmargin\tholds\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
