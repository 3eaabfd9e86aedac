#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/gaussian.hpp"
#include "bfa/operators.hpp"
#include "bfa/symmetric.hpp"
#include "oracles.hpp"

using namespace bfa;
using std::numbers::pi;

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-8.0) < 1e-14);
  // against direct integration of the density
  const auto density = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * pi); };
  for (double x : {-2.5, -0.3, 0.7, 1.4}) {
    CHECK(normal_cdf(x) == doctest::Approx(0.5 + oracle::integrate(density, 0.0, x)).epsilon(1e-10));
  }
}

TEST_CASE("sheppard formula and sampler") {
  CHECK(sheppard(1.0) == doctest::Approx(0.0).scale(1));
  CHECK(sheppard(0.0) == doctest::Approx(0.5));
  CHECK(sheppard(-1.0) == doctest::Approx(1.0));
  for (double rho : {-0.7, 0.2, 0.95}) CHECK(agrees(sheppard(rho), sheppard_mc(rho, {200000, 3})));
  CHECK_THROWS_AS(sheppard(1.2), DomainError);
}

TEST_CASE("correlated gaussians have the requested correlation") {
  Rng rng(4);
  std::vector<double> g(1), h(1);
  double sgh = 0, sgg = 0, shh = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    correlated_gaussians(rng, g, h, 0.6);
    sgh += g[0] * h[0];
    sgg += g[0] * g[0];
    shh += h[0] * h[0];
  }
  CHECK(sgh / n == doctest::Approx(0.6).epsilon(0.02));
  CHECK(sgg / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(shh / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("majority limits") {
  CHECK(maj_stab_limit(0.0) == doctest::Approx(0.0).scale(1));
  CHECK(maj_stab_limit(1.0) == doctest::Approx(1.0));
  CHECK(wk_maj_limit(1) == doctest::Approx(2.0 / pi));
  CHECK(wk_maj_limit(3) == doctest::Approx(1.0 / (3.0 * pi)));
  CHECK_THROWS_AS(wk_maj_limit(2), DomainError);
  // finite majorities approach the level weights
  const SymmetricSpectrum m = majority_spectrum(1001);
  const double w3 = m.level_weight(3);
  CHECK(w3 == doctest::Approx(wk_maj_limit(3)).epsilon(0.01));
}

TEST_CASE("multilinear polynomials") {
  const MultilinearPoly q(3, {{0b011, 2.0}, {0b100, -1.0}, {0, 0.5}});
  const std::vector<double> x{1.5, -2.0, 0.25};
  CHECK(q(x) == doctest::Approx(0.5 + 2.0 * 1.5 * -2.0 - 0.25));
  const Spectrum s = q.to_spectrum();
  CHECK(s[0b011] == 2.0);
  CHECK(s[0b100] == -1.0);
  const MultilinearPoly back = MultilinearPoly::from_spectrum(s);
  CHECK(back.coeffs().size() == 3);
  CHECK_THROWS_AS(MultilinearPoly(2, {{0b100, 1.0}}), DomainError);
}

TEST_CASE("gaussian stability matches the boolean spectral formula") {
  const TruthTable f = random_table(6, 7);
  const MultilinearPoly q = MultilinearPoly::from_spectrum(wht(f));
  for (double rho : {-0.5, 0.3, 0.9}) {
    CHECK(gstab(q, rho) == doctest::Approx(stability(f, rho)).epsilon(1e-12));
    CHECK(agrees(gstab(q, rho), gstab_mc(q, rho, {200000, 9})));
  }
  // sign of a single variable: Gaussian stability 1 - 2 arccos(rho)/pi
  const GaussianPredicate sgn = halfspace({1.0});
  CHECK(agrees(1.0 - 2.0 * sheppard(0.4), gstab_mc(sgn, 0.4, {200000, 2})));
}

TEST_CASE("rotation sensitivity of halfspaces and the KO bound") {
  const GaussianPredicate h = halfspace({1.0, -2.0, 0.5});
  for (double delta : {0.1, 0.7, 2.0}) {
    CHECK(agrees(delta / pi, rotation_sensitivity_mc(h, delta, {200000, 11})));
  }
  for (int ell : {2, 3, 5}) {
    const KoReport r = ko_bound_check(h, ell, {200000, 3});
    CHECK(r.balanced);
    CHECK(r.holds);
    CHECK(r.bound == doctest::Approx(1.0 / (2 * ell)));
    CHECK(r.delta == doctest::Approx(pi / (2 * ell)));
  }
  // an unbalanced predicate is flagged rather than counted
  const GaussianPredicate shifted{1, [](std::span<const double> x) { return x[0] > 1.0 ? -1 : 1; }, "shift"};
  const KoReport u = ko_bound_check(shifted, 2, {50000, 3});
  CHECK_FALSE(u.balanced);
  CHECK_FALSE(u.holds);
  CHECK_THROWS_AS(ko_bound_check(h, 1, {1000, 1}), DomainError);
  CHECK_THROWS_AS(rotation_sensitivity_mc(h, 4.0, {1000, 1}), DomainError);
}

TEST_CASE("sign of a polynomial") {
  const MultilinearPoly q(2, {{0b11, 1.0}});
  const GaussianPredicate p = sign_of(q);
  CHECK(p.fn(std::vector<double>{1.0, 2.0}) == 1);
  CHECK(p.fn(std::vector<double>{-1.0, 2.0}) == -1);
  // sgn(x1 x2) is balanced with RS(delta) = Pr[exactly one coordinate flips sign]
  const double a = 0.5 / pi;
  const double expected = 2 * a * (1 - a);
  CHECK(agrees(expected, rotation_sensitivity_mc(p, 0.5, {200000, 5})));
}

TEST_CASE("ornstein-uhlenbeck operator") {
  const MultilinearPoly q(3, {{0b011, 1.0}, {0b111, 0.5}, {0b100, -2.0}});
  const std::vector<double> x{0.3, -1.2, 2.0};
  const double exact = ornstein_uhlenbeck(q, 0.6, x);
  CHECK(exact == doctest::Approx(0.36 * 0.3 * -1.2 + 0.5 * 0.216 * 0.3 * -1.2 * 2.0 - 2.0 * 0.6 * 2.0));
  CHECK(agrees(exact, ornstein_uhlenbeck_mc(q, 0.6, x, {200000, 1})));
}

TEST_CASE("ks statistic") {
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i) s.push_back((i + 0.5) / 1000.0);
  const double d = ks_statistic(s, [](double t) { return std::clamp(t, 0.0, 1.0); });
  CHECK(d == doctest::Approx(0.0005).epsilon(1e-6));
}
