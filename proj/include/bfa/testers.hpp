#pragma once

// Property tests on boolean functions. Each has a closed-form acceptance
// probability in terms of the spectrum and a Monte-Carlo run of the actual
// query protocol; TestMode picks either or both.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfa/core.hpp"
#include "bfa/mc.hpp"
#include "bfa/symmetric.hpp"

namespace bfa {

struct TestMode {
  bool exact = true;
  std::optional<McParams> mc;
};

struct TestOutcome {
  std::string test;
  std::vector<std::pair<std::string, double>> params;
  std::optional<double> exact_accept;
  std::optional<McReport> mc;

  // True unless both parts are present and disagree by more than 4 stderr.
  bool consistent() const;
};

void to_json(nlohmann::json& j, const TestOutcome& t);

struct NearestLinear {
  Mask set = 0;
  double dist = 0.0;
};

struct NearestDictator {
  int sign = 1;
  int index = 1;  // 1-based
  double dist = 0.0;
};

struct QuasirandomReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<int> junta;  // 1-based indices with Inf_i^(1-delta) >= epsilon
  bool is_quasirandom = true;
};

// BLR: accept iff f(x) f(y) = f(x + y). Acceptance 1/2 + 1/2 sum_S f^(S)^3.
double blr_accept(const Spectrum& s);
McReport blr_mc(const Oracle& f, const McParams& params);
TestOutcome blr(const TruthTable& f, const TestMode& mode);

// Ties go to the smallest mask (linear) or smallest index, + before - (dictator).
NearestLinear nearest_linear(const TruthTable& f);
NearestDictator nearest_signed_dictator(const TruthTable& f);

// Majority vote over `trials` (odd) probes f(y) f(x + y) with uniform y.
int local_decode(const TruthTable& f, Mask x, int trials, std::uint64_t seed);

// NAE on per-coordinate uniform not-all-equal triples. Acceptance 3/4 - 3/4 Stab_{-1/3}(f).
double nae_accept(const Spectrum& s);
double nae_accept(const SymmetricSpectrum& s);
McReport nae_mc(const Oracle& f, const McParams& params);
TestOutcome nae_test(const TruthTable& f, const TestMode& mode);

// rho-noise test: accept iff f(x) = f(y), y ~ N_rho(x). Acceptance 1/2 + 1/2 Stab_rho(f).
double kkmo_accept(const Spectrum& s, double rho);
double kkmo_accept(const SymmetricSpectrum& s, double rho);
McReport kkmo_mc(const Oracle& f, double rho, const McParams& params);
TestOutcome kkmo_test(const TruthTable& f, double rho, const TestMode& mode);

// 3XOR_delta: x, y uniform, z = x + y, x' ~ N_{1-delta}(x); accept iff
// f(x') f(y) f(z) = 1. Acceptance 1/2 + 1/2 sum_S (1-delta)^|S| f^(S)^3.
double threexor_accept(const Spectrum& s, double delta);
double threexor_accept(const SymmetricSpectrum& s, double delta);
McReport threexor_mc(const Oracle& f, double delta, const McParams& params);
TestOutcome threexor_test(const TruthTable& f, double delta, const TestMode& mode);

QuasirandomReport quasirandomness(const Spectrum& s, double epsilon, double delta);
QuasirandomReport quasirandomness(const SymmetricSpectrum& s, double epsilon, double delta);

}  // namespace bfa
