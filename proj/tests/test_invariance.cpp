#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bfa/error.hpp"
#include "bfa/invariance.hpp"
#include "oracles.hpp"

using namespace bfa;

TEST_CASE("smooth threshold shape") {
  const SmoothThreshold psi(0.5, 0.25);
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(-3.0) == 1.0);
  CHECK(psi(1.0) == 0.0);
  CHECK(psi(0.5) == doctest::Approx(0.5));
  for (double x = -0.1; x <= 1.1; x += 0.01) {
    CHECK(psi(x) >= 0.0);
    CHECK(psi(x) <= 1.0);
    if (x > 0.0) CHECK(psi(x) <= psi(x - 0.01) + 1e-15);
  }
}

TEST_CASE("smooth threshold derivatives match finite differences") {
  const SmoothThreshold psi(0.0, 0.5);
  const double h = 1e-5;
  for (double x = -1.2; x <= 1.2; x += 0.07) {
    for (int k = 1; k <= 4; ++k) {
      const double fd = (psi.derivative(x + h, k - 1) - psi.derivative(x - h, k - 1)) / (2 * h);
      CHECK(psi.derivative(x, k) == doctest::Approx(fd).epsilon(1e-4).scale(10.0));
    }
  }
  // m4 bounds the fourth derivative and is attained up to grid resolution
  double seen = 0.0;
  for (double x = -1.0; x <= 1.0; x += 1e-4) seen = std::max(seen, std::abs(psi.derivative(x, 4)));
  CHECK(seen <= psi.m4() * (1 + 1e-12));
  CHECK(seen >= psi.m4() * 0.999);
  CHECK_THROWS_AS(SmoothThreshold(0.0, 0.0), DomainError);
}

TEST_CASE("weighted sums") {
  const WeightedSum w({3.0, 4.0});
  CHECK(w.weights()[0] == doctest::Approx(0.6));
  CHECK(w.fourth_power_sum() == doctest::Approx(0.6 * 0.6 * 0.6 * 0.6 + 0.8 * 0.8 * 0.8 * 0.8));
  CHECK(w.max_square() == doctest::Approx(0.64));
  CHECK_FALSE(w.equal_magnitudes());
  CHECK(WeightedSum({1.0, -1.0}).equal_magnitudes());
  CHECK_THROWS_AS(WeightedSum({0.0, 0.0}), DomainError);
}

TEST_CASE("rademacher laws against the binomial oracle") {
  for (int n : {1, 5, 10, 101}) {
    const WeightedSum w = WeightedSum::equal(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k <= n; ++k) {
      // S = (n - 2j) scale with j minus signs; S <= value of k minus signs <=> j >= k
      const double t = (n - 2 * k) * scale;
      const double expected = 1.0 - oracle::binomial_cdf(n, k - 1);
      CHECK(rademacher_cdf_exact(w, t + 1e-9) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  CHECK(rademacher_cdf_exact(WeightedSum::equal(4), 0.0) == doctest::Approx(11.0 / 16.0));
  CHECK(rademacher_cdf_exact(WeightedSum::equal(1), 0.0) == doctest::Approx(0.5));
  // unequal weights enumerate
  const WeightedSum u({1.0, 2.0, 2.0});
  const DiscreteLaw law = rademacher_law(u);
  CHECK(law.atoms.size() == 6);
  double total = 0.0;
  for (const auto& [v, p] : law.atoms) total += p;
  CHECK(total == doctest::Approx(1.0));
  CHECK(law.cdf(-10) == 0.0);
  CHECK(law.cdf(10) == doctest::Approx(1.0));
  std::vector<double> many(30, 1.0);
  many[0] = 2.0;
  CHECK_THROWS_AS(rademacher_law(WeightedSum(many)), CapacityError);
}

TEST_CASE("berry-esseen gap") {
  const BerryEsseenReport r = berry_esseen_gap(WeightedSum::equal(1));
  CHECK(r.gap == doctest::Approx(0.5 - oracle::phi(-1.0)).epsilon(1e-12));
  CHECK(r.epsilon == doctest::Approx(1.0));
  const BerryEsseenReport a = berry_esseen_gap(WeightedSum::equal(100));
  const BerryEsseenReport b = berry_esseen_gap(WeightedSum::equal(400));
  CHECK(b.gap < a.gap);
  CHECK(a.gap == doctest::Approx(oracle::binomial_cdf(100, 50) - 0.5).epsilon(1e-6));
}

TEST_CASE("gaussian expectation of the threshold") {
  const SmoothThreshold psi(0.3, 0.2);
  const auto density = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
  const double ref = oracle::phi(-9.0) + oracle::integrate([&](double x) { return psi(x) * density(x); }, -9.0, 9.0, 200000);
  CHECK(gaussian_expectation(psi) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("hybrid bound on equal weights") {
  const SmoothThreshold psi(0.0, 0.5);
  const HybridReport r = hybrid_smooth_gap(WeightedSum::equal(16), psi, {1000, 1});
  CHECK(r.exact);
  CHECK(r.gap <= r.bound);
  CHECK(r.bound == doctest::Approx(psi.m4() / 16.0));
}

TEST_CASE("pairwise sum has unit variance") {
  const MultilinearPoly q = pairwise_sum(6);
  double var = 0.0;
  for (const auto& [set, c] : q.coeffs()) var += c * c;
  CHECK(var == doctest::Approx(1.0));
  CHECK(q.coeffs().size() == 15);
}

TEST_CASE("invariance gap") {
  const InvarianceReport r = invariance_gap(pairwise_sum(8), {200000, 1});
  CHECK(r.rademacher_exact);
  CHECK(r.degree == 2);
  CHECK(r.tau == doctest::Approx(2.0 / 8.0));
  CHECK(r.gap > 0.0);
  CHECK(r.gap < 0.5);
  CHECK_THROWS_AS(invariance_gap(MultilinearPoly(2, {{0b11, 2.0}}), {1000, 1}), DomainError);
}

TEST_CASE("carbery-wright on a single variable") {
  const MultilinearPoly q(1, {{1, 1.0}});
  const CarberyWrightReport r = carbery_wright_mc(q, {0.05, 0.1, 0.3}, {200000, 7});
  CHECK(r.degree == 1);
  CHECK(r.monotone);
  for (const auto& row : r.rows) CHECK(agrees(2 * oracle::phi(row.eps) - 1, row.probability));
}

TEST_CASE("experiment csv") {
  ExperimentConfig cfg;
  cfg.experiment = "be";
  cfg.ns = {4, 16};
  std::ostringstream out;
  write_csv(out, run_experiment(cfg));
  CHECK(out.str().rfind("experiment,n,gap,bound\n", 0) == 0);
  cfg.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(cfg), DomainError);
}
