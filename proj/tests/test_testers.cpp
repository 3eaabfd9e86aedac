#include <doctest.h>

#include <cmath>

#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/testers.hpp"
#include "oracles.hpp"

using namespace bfa;

namespace {

TruthTable table_from_bits(int n, std::uint64_t bits) {
  return TruthTable::from_predicate(n, [&](Mask x) { return (bits >> x & 1u) ? -1 : 1; });
}

}  // namespace

TEST_CASE("blr acceptance against pair enumeration, all functions n <= 3") {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (1u << n)); ++bits) {
      const TruthTable f = table_from_bits(n, bits);
      CHECK(std::abs(blr_accept(wht(f)) - oracle::blr(oracle::from_bits(n, bits))) < 1e-12);
    }
  }
}

TEST_CASE("blr on parities and soundness") {
  CHECK(blr_accept(wht(parity(0b101, 8))) == doctest::Approx(1.0));
  for (std::uint64_t bits = 0; bits < 256; ++bits) {
    const TruthTable f = table_from_bits(3, bits);
    const double eps = 1.0 - blr_accept(wht(f));
    CHECK(nearest_linear(f).dist <= eps + 1e-12);
  }
  const TestOutcome t = blr(random_table(2, 10), {true, McParams{100000, 3}});
  REQUIRE(t.exact_accept);
  REQUIRE(t.mc);
  CHECK(t.consistent());
}

TEST_CASE("nearest linear and signed dictator") {
  const NearestLinear l = nearest_linear(parity(0b110, 5).negated());
  // -chi_S is at distance 1 from chi_S; every other character ties at 1/2
  CHECK(l.set == 0);
  CHECK(l.dist == doctest::Approx(0.5));
  CHECK(nearest_linear(parity(0b110, 5)).set == 0b110);
  const NearestDictator d = nearest_signed_dictator(dictator(3, 4).negated());
  CHECK(d.index == 3);
  CHECK(d.sign == -1);
  CHECK(d.dist == doctest::Approx(0.0));
  const NearestDictator m = nearest_signed_dictator(majority(3));
  CHECK(m.index == 1);
  CHECK(m.sign == 1);
  CHECK(m.dist == doctest::Approx(0.25));
}

TEST_CASE("local decoding corrects a few errors") {
  TruthTable f = parity(0b1011, 8);
  for (Mask x : {3u, 77u, 200u}) f = f.with_flipped(x);
  for (Mask x = 0; x < 256; x += 17) CHECK(local_decode(f, x, 41, x) == chi(0b1011, x));
  CHECK_THROWS_AS(local_decode(f, 0, 10, 1), DomainError);
}

TEST_CASE("nae acceptance against triple enumeration") {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (1u << n)); ++bits) {
      const TruthTable f = table_from_bits(n, bits);
      CHECK(std::abs(nae_accept(wht(f)) - oracle::nae(oracle::from_bits(n, bits), n)) < 1e-12);
    }
  }
  CHECK(nae_accept(wht(majority(5))) == doctest::Approx(nae_accept(majority_spectrum(5))).epsilon(1e-12));
  const McReport r = nae_mc(Oracle::of(majority(7)), {200000, 8});
  CHECK(agrees(nae_accept(wht(majority(7))), r));
}

TEST_CASE("kkmo and 3xor against enumeration") {
  const TruthTable f0 = random_table(0, 4);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const TruthTable f = random_table(seed, 4);
    auto v = oracle::Values(16);
    for (Mask x = 0; x < 16; ++x) v[x] = f(x);
    for (double rho : {0.0, 0.3, 0.7}) {
      CHECK(kkmo_accept(wht(f), rho) == doctest::Approx(oracle::kkmo(v, rho, 4)).epsilon(1e-12));
    }
    for (double delta : {0.0, 0.1, 0.5}) {
      CHECK(threexor_accept(wht(f), delta) == doctest::Approx(oracle::threexor(v, delta, 4)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(kkmo_accept(wht(f0), -0.5), DomainError);
  CHECK(kkmo_accept(wht(dictator(2, 6)), 0.6) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(threexor_accept(wht(dictator(2, 6)), 0.2) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(kkmo_accept(majority_spectrum(9), 0.4) == doctest::Approx(kkmo_accept(wht(majority(9)), 0.4)).epsilon(1e-12));
  CHECK(threexor_accept(majority_spectrum(9), 0.3) ==
        doctest::Approx(threexor_accept(wht(majority(9)), 0.3)).epsilon(1e-12));
}

TEST_CASE("tester outcomes carry consistent exact and MC parts") {
  const TruthTable f = random_table(21, 9);
  const TestMode both{true, McParams{100000, 4}};
  CHECK(nae_test(f, both).consistent());
  CHECK(kkmo_test(f, 0.5, both).consistent());
  CHECK(threexor_test(f, 0.25, both).consistent());
  const TestOutcome only_exact = kkmo_test(f, 0.5, {true, std::nullopt});
  CHECK_FALSE(only_exact.mc.has_value());
  CHECK(only_exact.consistent());
}

TEST_CASE("quasirandomness") {
  const QuasirandomReport d = quasirandomness(wht(dictator(1, 6)), 0.1, 0.1);
  CHECK_FALSE(d.is_quasirandom);
  REQUIRE(d.junta.size() == 1);
  CHECK(d.junta[0] == 1);
  const QuasirandomReport m = quasirandomness(majority_spectrum(101), 0.1, 0.1);
  CHECK(m.is_quasirandom);
  CHECK_THROWS_AS(quasirandomness(wht(dictator(1, 6)), 0.0, 0.1), DomainError);
}
