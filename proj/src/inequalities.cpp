#include "bfa/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "bfa/error.hpp"
#include "bfa/family.hpp"
#include "bfa/format.hpp"
#include "bfa/operators.hpp"
#include "bfa/rng.hpp"

namespace bfa {
namespace {

constexpr int kMaxExhaustiveVars = 4;

double level1_weight(const Spectrum& s) {
  double total = 0.0;
  for (int i = 0; i < s.n(); ++i) total += s[Mask{1} << i] * s[Mask{1} << i];
  return total;
}

double max_singleton(const Spectrum& s) {
  double best = 0.0;
  for (int i = 0; i < s.n(); ++i) best = std::max(best, std::abs(s[Mask{1} << i]));
  return best;
}

void check_indicator(const RealTable& f) {
  for (double v : f.values()) {
    if (v != 0.0 && v != 1.0) throw DomainError("expected a 0/1 indicator table");
  }
}

std::string table_id(const TruthTable& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "table:%d:0x%llx", t.n(), static_cast<unsigned long long>(t.words()[0]));
  return buf;
}

InequalityReport mist_report(double stab, double rho, double eps, double mean, double max_inf) {
  InequalityReport r = make_report("mist", "", stab, maj_stab_limit(rho));
  r.params = {{"rho", rho}, {"eps", eps}, {"mean", mean}, {"max_inf", max_inf}};
  r.asserted = false;
  if (std::abs(mean) > 1e-12) r.note = "precondition: f not balanced";
  else if (max_inf > eps) r.note = "precondition: influence exceeds eps";
  return r;
}

InequalityReport two_pi_report(double w1, double max_coeff, double eps) {
  const double limit = 2.0 / std::numbers::pi;
  InequalityReport r = make_report("two_pi", "", w1, limit);
  r.params = {{"eps", eps}, {"max_singleton", max_coeff}, {"implied_C", (w1 - limit) / eps}};
  r.asserted = false;
  if (max_coeff > eps) r.note = "precondition: max |f^(i)| exceeds eps";
  return r;
}

}  // namespace

InequalityReport make_report(std::string inequality, std::string subject, double lhs, double rhs) {
  InequalityReport r;
  r.inequality = std::move(inequality);
  r.subject = std::move(subject);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.holds = r.margin >= -kMarginTolerance;
  return r;
}

double moment(const RealTable& f, double p) {
  double total = 0.0;
  for (double v : f.values()) total += std::pow(std::abs(v), p);
  return total / static_cast<double>(f.size());
}

double norm(const RealTable& f, double p) {
  if (!(p >= 1.0)) throw DomainError("norm needs p >= 1");
  return std::pow(moment(f, p), 1.0 / p);
}

RealTable indicator_of(const TruthTable& t) {
  return RealTable::from_function(t.n(), [&](Mask x) { return t.bit(x) ? 1.0 : 0.0; });
}

InequalityReport bonami_check(const RealTable& f, int d) {
  if (d < 0) throw DomainError("bonami_check: degree must be non-negative");
  const int degree = summary(wht(f)).degree;
  if (degree > d) throw DomainError("bonami_check: degree " + std::to_string(degree) + " exceeds d");
  const double m2 = moment(f, 2.0);
  InequalityReport r = make_report("bonami", "", moment(f, 4.0), std::pow(9.0, d) * m2 * m2);
  r.params = {{"d", d}};
  return r;
}

InequalityReport bonami_check(const MultilinearPoly& q, int d) { return bonami_check(inverse_wht(q.to_spectrum()), d); }

std::pair<double, double> hypercontractivity_norms(const RealTable& f, double p, double q, double rho) {
  return {norm(noise_operator(f, rho), q), norm(f, p)};
}

InequalityReport hypercontractivity_check(const RealTable& f, double p, double q, double rho) {
  if (!(p >= 1.0 && q >= p)) throw DomainError("hypercontractivity needs 1 <= p <= q");
  const double limit = q == p ? 1.0 : std::sqrt((p - 1.0) / (q - 1.0));
  if (!(rho >= 0.0 && rho <= limit + 1e-12)) throw DomainError("hypercontractivity needs 0 <= rho <= sqrt((p-1)/(q-1))");
  const auto [lhs, rhs] = hypercontractivity_norms(f, p, q, rho);
  InequalityReport r = make_report("hypercontractivity", "", lhs, rhs);
  r.params = {{"p", p}, {"q", q}, {"rho", rho}};
  return r;
}

InequalityReport hypercontractivity_corollary_check(const RealTable& f) {
  const auto [lhs, rhs] = hypercontractivity_norms(f, 4.0 / 3.0, 2.0, 1.0 / std::numbers::sqrt3);
  InequalityReport r = make_report("hypercontractivity_sq", "", lhs * lhs, rhs * rhs);
  r.params = {{"p", 4.0 / 3.0}, {"q", 2.0}, {"rho", 1.0 / std::numbers::sqrt3}};
  return r;
}

InequalityReport sse_check(const RealTable& indicator, double rho) {
  check_indicator(indicator);
  check_rho(rho, 0.0, 1.0);
  const Spectrum s = wht(indicator);
  const double alpha = s[0];
  InequalityReport r = make_report("sse", "", stability(s, rho), std::pow(alpha, 2.0 / (1.0 + rho)));
  r.params = {{"rho", rho}, {"alpha", alpha}};
  r.asserted = std::abs(rho - 1.0 / 3.0) < 1e-15;
  return r;
}

InequalityReport kkl_check(const TruthTable& f) {
  if (2 * f.count_minus() != f.size()) throw DomainError("kkl_check: f must be balanced");
  const InfluenceProfile inf = influences(f);
  const double max_inf = *std::max_element(inf.per_var.begin(), inf.per_var.end());
  InequalityReport r = make_report("kkl", "", 3.0 * std::pow(9.0, -inf.total), std::sqrt(max_inf));
  r.params = {{"total_influence", inf.total}, {"max_influence", max_inf}};
  return r;
}

InequalityReport level1_check(const RealTable& indicator) {
  check_indicator(indicator);
  const Spectrum s = wht(indicator);
  const double alpha = s[0];
  const double rhs = alpha > 0.0 ? alpha * alpha * std::pow(std::sqrt(2.0 * std::log(1.0 / alpha)) + 2.0, 2) : 0.0;
  InequalityReport r = make_report("level1", "", level1_weight(s), rhs);
  r.params = {{"alpha", alpha}};
  if (alpha > std::exp(-0.5)) {
    r.asserted = false;
    r.note = "alpha above e^{-1/2}";
  }
  return r;
}

InequalityReport two_pi_check(const Spectrum& s, double eps) {
  if (!(eps > 0.0)) throw DomainError("two_pi_check: eps must be positive");
  return two_pi_report(level1_weight(s), max_singleton(s), eps);
}

InequalityReport two_pi_check(const SymmetricSpectrum& s, double eps) {
  if (!(eps > 0.0)) throw DomainError("two_pi_check: eps must be positive");
  return two_pi_report(s.level_weight(1), std::abs(s.coefficient(1)), eps);
}

InequalityReport two_pi_majority(int n, double tol) {
  const SymmetricSpectrum s = majority_spectrum(n);
  InequalityReport r = make_report("two_pi_majority", "maj:" + std::to_string(n),
                                   std::abs(s.level_weight(1) - 2.0 / std::numbers::pi), tol);
  r.params = {{"W1", s.level_weight(1)}};
  return r;
}

InequalityReport mist_check(const Spectrum& s, double rho, double eps) {
  check_rho(rho, 0.0, 1.0);
  const auto inf = influences(s).per_var;
  const double max_inf = inf.empty() ? 0.0 : *std::max_element(inf.begin(), inf.end());
  return mist_report(stability(s, rho), rho, eps, s[0], max_inf);
}

InequalityReport mist_check(const SymmetricSpectrum& s, double rho, double eps) {
  check_rho(rho, 0.0, 1.0);
  return mist_report(s.stability(rho), rho, eps, s.mean(), s.influence());
}

InequalityReport mist_majority(int n, double rho, double tol) {
  check_rho(rho, 0.0, 1.0);
  const double stab = majority_spectrum(n).stability(rho);
  InequalityReport r = make_report("mist_majority", "maj:" + std::to_string(n),
                                   std::abs(stab - maj_stab_limit(rho)), tol);
  r.params = {{"rho", rho}, {"stab", stab}};
  return r;
}

InequalityReport poincare_check(const TruthTable& f) {
  const double mean = 1.0 - 2.0 * static_cast<double>(f.count_minus()) / static_cast<double>(f.size());
  return make_report("poincare", "", 1.0 - mean * mean, influences(f).total);
}

InequalityReport edge_isoperimetry_check(const TruthTable& f) {
  const double minus = static_cast<double>(f.count_minus()) / static_cast<double>(f.size());
  const double alpha = std::min(minus, 1.0 - minus);
  const double lhs = alpha > 0.0 ? 2.0 * alpha * std::log2(1.0 / alpha) : 0.0;
  InequalityReport r = make_report("edge_isoperimetry", "", lhs, influences(f).total);
  r.params = {{"alpha", alpha}};
  return r;
}

std::vector<std::string> suite_names() { return {"bonami", "hyper", "sse", "kkl", "level1", "poincare", "edgeiso"}; }

SuiteResult run_suite(const SuiteConfig& config) {
  SuiteResult out;
  auto add = [&](InequalityReport r, std::string subject) {
    r.subject = std::move(subject);
    if (r.violated()) ++out.violations;
    out.rows.push_back(std::move(r));
  };

  const std::string& name = config.suite;
  if (name == "bonami") {
    check_table_vars(config.n);
    Rng rng(config.seed);
    for (std::uint64_t i = 0; i < config.count; ++i) {
      std::vector<double> coeffs(std::size_t{1} << config.n, 0.0);
      for (std::size_t set = 0; set < coeffs.size(); ++set) {
        if (std::popcount(set) <= config.degree) coeffs[set] = rng.normal();
      }
      const RealTable f = inverse_wht(Spectrum(config.n, std::move(coeffs)));
      add(bonami_check(f, config.degree), "poly:" + std::to_string(config.seed) + ":" + std::to_string(i));
    }
    return out;
  }
  if (name == "hyper") {
    const double rho = config.rho.value_or(
        config.q == config.p ? 1.0 : std::sqrt((config.p - 1.0) / (config.q - 1.0)));
    for (std::uint64_t i = 0; i < config.count; ++i) {
      const std::uint64_t seed = mix_seed(config.seed, i);
      const TruthTable f = random_table(seed, config.n);
      add(hypercontractivity_check(to_real(f), config.p, config.q, rho),
          "random:" + std::to_string(seed) + ":" + std::to_string(config.n));
    }
    return out;
  }

  if (config.n < 0 || config.n > kMaxExhaustiveVars) {
    throw CapacityError("exhaustive suites need n <= " + std::to_string(kMaxExhaustiveVars));
  }
  const std::uint64_t tables = std::uint64_t{1} << (std::size_t{1} << config.n);
  for (std::uint64_t bits = 0; bits < tables; ++bits) {
    const TruthTable t = TruthTable::from_words(config.n, {bits});
    if (name == "sse") {
      add(sse_check(indicator_of(t), config.rho.value_or(1.0 / 3.0)), table_id(t));
    } else if (name == "kkl") {
      if (2 * t.count_minus() == t.size()) add(kkl_check(t), table_id(t));
    } else if (name == "level1") {
      InequalityReport r = level1_check(indicator_of(t));
      if (r.asserted) add(std::move(r), table_id(t));
    } else if (name == "poincare") {
      add(poincare_check(t), table_id(t));
    } else if (name == "edgeiso") {
      add(edge_isoperimetry_check(t), table_id(t));
    } else {
      throw DomainError("unknown suite '" + name + "'");
    }
  }
  return out;
}

void write_tsv(std::ostream& out, const std::vector<InequalityReport>& rows) {
  out << "function\tinequality\tlhs\trhs\tmargin\tholds\n";
  for (const auto& r : rows) {
    out << r.subject << '\t' << r.inequality << '\t' << format_double(r.lhs) << '\t' << format_double(r.rhs) << '\t'
        << format_double(r.margin) << '\t' << (r.holds ? "yes" : "no") << '\n';
  }
}

}  // namespace bfa
