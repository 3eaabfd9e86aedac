#pragma once

// Checkable forms of the classical inequalities. Where a statement carries an
// unspecified constant, the check uses the explicit instantiation that its
// proof produces; statements without one are reported but not asserted.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfa/core.hpp"
#include "bfa/gaussian.hpp"
#include "bfa/symmetric.hpp"

namespace bfa {

inline constexpr double kMarginTolerance = 1e-9;

struct InequalityReport {
  std::string inequality;
  std::string subject;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool holds = true;    // margin >= -kMarginTolerance
  bool asserted = true;  // false for report-only checks
  std::string note;

  // A violation is an asserted check that does not hold.
  bool violated() const { return asserted && !holds; }
};

InequalityReport make_report(std::string inequality, std::string subject, double lhs, double rhs);

// E[|f|^p] and E[|f|^p]^{1/p} over the whole cube.
double moment(const RealTable& f, double p);
double norm(const RealTable& f, double p);

// 1 where the table reads -1 (bit set), else 0.
RealTable indicator_of(const TruthTable& t);

// E[f^4] <= 9^d E[f^2]^2 for deg f <= d.
InequalityReport bonami_check(const RealTable& f, int d);
InequalityReport bonami_check(const MultilinearPoly& q, int d);

// ||T_rho f||_q <= ||f||_p for 1 <= p <= q and 0 <= rho <= sqrt((p-1)/(q-1)).
InequalityReport hypercontractivity_check(const RealTable& f, double p, double q, double rho);
// ||T_{1/sqrt 3} f||_2^2 <= ||f||_{4/3}^2
InequalityReport hypercontractivity_corollary_check(const RealTable& f);
// (||T_rho f||_q, ||f||_p) with no parameter checks, for probing sharpness.
std::pair<double, double> hypercontractivity_norms(const RealTable& f, double p, double q, double rho);

// Stab_rho(1_A) <= alpha^{2/(1+rho)}; asserted at rho = 1/3 only.
InequalityReport sse_check(const RealTable& indicator, double rho);

// 3 * 9^{-Inf(f)} <= sqrt(max_i Inf_i(f)) for balanced f.
InequalityReport kkl_check(const TruthTable& f);

// W^1(1_A) <= alpha^2 (sqrt(2 ln(1/alpha)) + 2)^2; asserted for alpha <= e^{-1/2}.
InequalityReport level1_check(const RealTable& indicator);

// W^1(f) against 2/pi when max_i |f^(i)| <= eps. Report only; the implied
// constant (W^1 - 2/pi)/eps is attached as a parameter.
InequalityReport two_pi_check(const Spectrum& s, double eps);
InequalityReport two_pi_check(const SymmetricSpectrum& s, double eps);
// |W^1(MAJ_n) - 2/pi| <= tol, asserted.
InequalityReport two_pi_majority(int n, double tol = 0.02);

// Stab_rho(f) against 1 - (2/pi) arccos(rho) for balanced f with small
// influences. Report only.
InequalityReport mist_check(const Spectrum& s, double rho, double eps);
InequalityReport mist_check(const SymmetricSpectrum& s, double rho, double eps);
// |Stab_rho(MAJ_n) - (1 - (2/pi) arccos rho)| <= tol, asserted.
InequalityReport mist_majority(int n, double rho, double tol = 0.02);

// Var(f) <= Inf(f).
InequalityReport poincare_check(const TruthTable& f);
// 2 alpha log2(1/alpha) <= Inf(f), alpha = min(Pr[f=1], Pr[f=-1]).
InequalityReport edge_isoperimetry_check(const TruthTable& f);

// Batch runs over exhaustive or random families of functions.
struct SuiteConfig {
  std::string suite;  // bonami, hyper, sse, kkl, level1, poincare, edgeiso
  int n = 4;
  std::uint64_t count = 1000;  // random suites only
  std::uint64_t seed = 1;
  int degree = 2;              // bonami
  double p = 2.0;              // hyper
  double q = 4.0;              // hyper
  std::optional<double> rho;   // sse: 1/3, hyper: sqrt((p-1)/(q-1))
};

struct SuiteResult {
  std::vector<InequalityReport> rows;
  std::size_t violations = 0;
};

SuiteResult run_suite(const SuiteConfig& config);
std::vector<std::string> suite_names();

// function, inequality, lhs, rhs, margin, holds
void write_tsv(std::ostream& out, const std::vector<InequalityReport>& rows);

}  // namespace bfa
