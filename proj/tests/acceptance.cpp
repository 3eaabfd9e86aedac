// One PASS/FAIL line per acceptance criterion, with the measured runtime
// against its budget. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bfa/family.hpp"
#include "bfa/gaussian.hpp"
#include "bfa/inequalities.hpp"
#include "bfa/invariance.hpp"
#include "bfa/operators.hpp"
#include "bfa/symmetric.hpp"
#include "bfa/testers.hpp"
#include "bfa/ulc.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace bfa;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

oracle::Values values_of(const TruthTable& t) {
  oracle::Values v(t.size());
  for (Mask x = 0; x < t.size(); ++x) v[x] = t(x);
  return v;
}

Outcome maj3_spectrum() {
  Outcome o;
  const Spectrum s = wht(majority(3));
  for (Mask set = 0; set < 8; ++set) {
    double expected = 0.0;
    if (std::popcount(set) == 1) expected = 0.5;
    if (set == 7) expected = -0.5;
    o.require(std::abs(s[set] - expected) <= 1e-12, "coefficient " + std::to_string(set));
  }
  o.detail = o.ok ? "4 nonzero coefficients exact" : o.detail;
  return o;
}

Outcome parseval_plancherel() {
  Outcome o;
  double worst = 0.0;
  auto check = [&](const TruthTable& f, const TruthTable& g) {
    const Spectrum sf = wht(f);
    const Spectrum sg = wht(g);
    double parseval = 0.0;
    for (double c : sf.coeffs()) parseval += c * c;
    worst = std::max(worst, std::abs(parseval - 1.0));
    worst = std::max(worst, std::abs(spectral_inner_product(sf, sg) - inner_product(f, g)));
  };
  for (std::uint64_t bits = 0; bits < 65536; ++bits) {
    check(TruthTable::from_words(4, {bits}), TruthTable::from_words(4, {(bits * 40503u + 1) & 0xffffu}));
  }
  for (std::uint64_t i = 0; i < 1000; ++i) check(random_table(2 * i, 12), random_table(2 * i + 1, 12));
  o.require(worst <= 1e-9, "max error " + fmt(worst));
  o.detail = o.ok ? "max error " + fmt(worst) : o.detail;
  return o;
}

Outcome blr_criterion() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (1u << n)); ++bits) {
      const TruthTable f = TruthTable::from_words(n, {bits});
      const double accept = blr_accept(wht(f));
      worst = std::max(worst, std::abs(accept - oracle::blr(values_of(f))));
      if (n == 3) {
        const double eps = 1.0 - accept;
        o.require(nearest_linear(f).dist <= eps + 1e-12, "soundness fails for table " + std::to_string(bits));
      }
    }
  }
  o.require(worst <= 1e-12, "max acceptance error " + fmt(worst));
  o.detail = o.ok ? "max error " + fmt(worst) + ", soundness on all 256 n=3 tables" : o.detail;
  return o;
}

Outcome nae_criterion() {
  Outcome o;
  double worst = 0.0;
  int perfect = 0;
  for (std::uint64_t bits = 0; bits < 256; ++bits) {
    const TruthTable f = TruthTable::from_words(3, {bits});
    const double accept = nae_accept(wht(f));
    worst = std::max(worst, std::abs(accept - oracle::nae(values_of(f), 3)));
    const bool is_dict = nearest_signed_dictator(f).dist == 0.0;
    const bool one = std::abs(accept - 1.0) <= 1e-12;
    o.require(one == is_dict, "acceptance 1 vs dictator mismatch at table " + std::to_string(bits));
    perfect += one;
  }
  o.require(perfect == 6, "expected 6 perfect functions, got " + std::to_string(perfect));
  o.require(worst <= 1e-12, "max error " + fmt(worst));
  o.detail = o.ok ? "max error " + fmt(worst) + ", exactly the 6 signed dictators accept surely" : o.detail;
  return o;
}

Outcome sheppard_criterion() {
  Outcome o;
  std::string d;
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const McReport r = sheppard_mc(rho, {1000000, 1});
    const double z = (r.estimate - sheppard(rho)) / r.std_error;
    o.require(agrees(sheppard(rho), r), "rho=" + fmt(rho) + " off by " + fmt(z) + " stderr");
    d += (d.empty() ? "z=" : ",") + fmt(z);
  }
  o.detail = o.ok ? d : o.detail;
  return o;
}

Outcome majority_criterion() {
  Outcome o;
  const SymmetricSpectrum m = majority_spectrum(101);
  for (double rho : {1.0 / 3.0, 1.0 / std::numbers::sqrt2}) {
    const double gap = std::abs(m.stability(rho) - maj_stab_limit(rho));
    o.require(gap <= 0.02, "Stab gap " + fmt(gap) + " at rho " + fmt(rho));
  }
  const double w1 = std::abs(m.level_weight(1) - 2.0 / std::numbers::pi);
  o.require(w1 <= 0.02, "W1 gap " + fmt(w1));
  const double ratio = m.total_influence() / std::sqrt(2.0 * 101 / std::numbers::pi);
  o.require(ratio >= 0.95 && ratio < 1.05, "Inf ratio " + fmt(ratio));
  o.detail = o.ok ? "W1 gap " + fmt(w1) + ", Inf ratio " + fmt(ratio) : o.detail;
  return o;
}

Outcome suites_criterion() {
  Outcome o;
  std::string d;
  auto suite = [&](const std::string& name, int n, std::uint64_t count, std::optional<double> rho = std::nullopt) {
    SuiteConfig cfg;
    cfg.suite = name;
    cfg.n = n;
    cfg.count = count;
    cfg.seed = 1;
    cfg.degree = 2;
    cfg.p = 2.0;
    cfg.q = 4.0;
    cfg.rho = rho;
    const SuiteResult r = run_suite(cfg);
    o.require(r.violations == 0, name + " n=" + std::to_string(n) + ": " + std::to_string(r.violations) + " violations");
    o.require(!r.rows.empty(), name + " checked nothing");
    if (n == 4 || name == "bonami" || name == "hyper") d += name + ":" + std::to_string(r.rows.size()) + " ";
  };
  suite("bonami", 8, 10000);
  suite("hyper", 10, 1000, 1.0 / std::sqrt(3.0));
  suite("sse", 4, 0, 1.0 / 3.0);
  suite("kkl", 4, 0);
  suite("level1", 4, 0);
  for (int n = 1; n <= 4; ++n) {
    suite("poincare", n, 0);
    suite("edgeiso", n, 0);
  }
  o.detail = o.ok ? d + "rows, 0 violations" : o.detail;
  return o;
}

Outcome kkmo_3xor_criterion() {
  Outcome o;
  const double rho = 0.6;
  const double delta = 0.15;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const TruthTable f = random_table(1000 + i, 12);
    const Spectrum s = wht(f);
    const McParams p{100000, 50 + i};
    o.require(agrees(kkmo_accept(s, rho), kkmo_mc(Oracle::of(f), rho, p)), "kkmo mismatch on function " + std::to_string(i));
    o.require(agrees(threexor_accept(s, delta), threexor_mc(Oracle::of(f), delta, p)),
              "3xor mismatch on function " + std::to_string(i));
  }
  for (int i = 1; i <= 12; ++i) {
    const Spectrum d = wht(dictator(i, 12));
    o.require(std::abs(kkmo_accept(d, rho) - (0.5 + 0.5 * rho)) <= 1e-12, "kkmo dictator value");
    o.require(std::abs(threexor_accept(d, delta) - (1.0 - delta / 2)) <= 1e-12, "3xor dictator value");
  }
  o.detail = o.ok ? "20 functions within 4 stderr, dictators exact" : o.detail;
  return o;
}

Outcome clt_criterion() {
  Outcome o;
  const double g100 = berry_esseen_gap(WeightedSum::equal(100)).gap;
  const double g400 = berry_esseen_gap(WeightedSum::equal(400)).gap;
  const double ratio = g400 / g100;
  o.require(ratio >= 0.4 && ratio <= 0.6, "gap ratio " + fmt(ratio));
  for (double t : {-1.0, 0.0, 0.3, 1.5}) {
    for (double lambda : {0.1, 0.25, 0.5, 1.0}) {
      const HybridReport h = hybrid_smooth_gap(WeightedSum::equal(16), SmoothThreshold(t, lambda), {1000, 1});
      o.require(h.exact, "hybrid not exact");
      o.require(h.gap <= h.bound, "hybrid gap " + fmt(h.gap) + " > bound " + fmt(h.bound));
    }
  }
  o.detail = o.ok ? "gap ratio " + fmt(ratio) + ", hybrid bound holds on 16 (t, lambda)" : o.detail;
  return o;
}

Outcome invariance_criterion() {
  Outcome o;
  std::vector<double> gaps;
  for (int n : {8, 16, 32}) gaps.push_back(invariance_gap(pairwise_sum(n), {1000000, 1}).gap);
  o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2],
            "gaps not decreasing: " + fmt(gaps[0]) + "," + fmt(gaps[1]) + "," + fmt(gaps[2]));
  const CarberyWrightReport cw = carbery_wright_mc(MultilinearPoly(1, {{1, 1.0}}), {0.01, 0.05, 0.1, 0.2, 0.5}, {1000000, 2});
  for (const auto& row : cw.rows) {
    o.require(agrees(2.0 * oracle::phi(row.eps) - 1.0, row.probability), "small-ball mismatch at eps " + fmt(row.eps));
  }
  o.detail = o.ok ? "gaps " + fmt(gaps[0]) + " > " + fmt(gaps[1]) + " > " + fmt(gaps[2]) : o.detail;
  return o;
}

Outcome ulc_criterion() {
  Outcome o;
  const UlcInstance psi = planted_instance(10, 2, 4, 0.0, 1);
  o.require(psi.value(*psi.planted()) == 1.0, "planted labelling not satisfying");
  const Assignment dict = dictator_assignment(psi, *psi.planted());
  std::string d;
  for (const char* name : {"nae", "blr", "kkmo:0.707", "3xor:0.1"}) {
    const Tester t = parse_tester(name);
    for (bool folded : {false, true}) {
      const McReport r = csp_value(reduce(psi, t, 100000, 3, folded), dict);
      o.require(r.estimate >= t.completeness() - 4 * r.std_error,
                std::string(name) + " value " + fmt(r.estimate) + " below completeness");
    }
  }
  const DecodeReport dec = decode_labelling(psi, dict, 0.2, 1);
  o.require(dec.labelling == *psi.planted(), "decoded labelling differs from planted");
  o.require(dec.bound_violations == 0, "J-size bound violated");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool folded : {false, true}) {
      const DecodeReport r = decode_labelling(psi, random_assignment(4, 10, seed), 0.2, seed, folded);
      o.require(r.bound_violations == 0, "J-size bound violated on a random assignment");
    }
  }
  o.detail = o.ok ? "completeness met by all testers, planted labelling decoded" : o.detail;
  return o;
}

Outcome determinism_criterion() {
  Outcome o;
  const std::vector<std::vector<std::string>> cmds{
      {"stability", "--fn", "maj:101", "--rho", "0.5", "--mc", "--samples", "20000", "--seed", "5"},
      {"test", "blr", "--fn", "random:4:10", "--mc", "--samples", "20000"},
      {"test", "nae", "--fn", "maj:301", "--mc", "--samples", "20000"},
      {"test", "kkmo", "--fn", "random:4:10", "--rho", "0.3", "--mc", "--samples", "20000"},
      {"test", "3xor", "--fn", "random:4:10", "--delta", "0.3", "--mc", "--samples", "20000"},
      {"test", "decode", "--fn", "random:4:10", "--x", "77"},
      {"gaussian", "sheppard", "--rho", "0.3", "--samples", "20000", "--json"},
      {"gaussian", "rs", "--halfspace", "1,1,1", "--ell", "3", "--samples", "20000"},
      {"gaussian", "gstab", "--fn", "pairwise:6", "--rho", "0.5", "--mc", "--samples", "20000"},
      {"ineq", "suite", "--name", "bonami", "--n", "6", "--count", "50"},
      {"ineq", "suite", "--name", "hyper", "--n", "6", "--count", "50"},
      {"clt", "hybrid", "--n", "40", "--samples", "20000"},
      {"clt", "invariance", "--fn", "pairwise:24", "--samples", "20000"},
      {"clt", "cw", "--fn", "pairwise:6", "--samples", "20000"},
      {"ulc", "gen", "--vertices", "12", "--degree", "3", "--L", "5", "--delta", "0.2", "--seed", "9"},
  };
  auto run = [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"bfa"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  for (const auto& cmd : cmds) {
    const std::string a = run(cmd);
    o.require(a.rfind("0\n", 0) == 0, cmd[0] + " " + cmd[1] + " failed: " + a);
    o.require(a == run(cmd), cmd[0] + " " + cmd[1] + " output differs between runs");
  }
  // library-level reruns
  const UlcInstance psi = planted_instance(10, 2, 4, 0.1, 4);
  const CspInstance c1 = reduce(psi, parse_tester("3xor:0.2"), 50000, 8, true);
  const CspInstance c2 = reduce(psi, parse_tester("3xor:0.2"), 50000, 8, true);
  o.require(nlohmann::json(c1).dump() == nlohmann::json(c2).dump(), "reduce differs between runs");
  o.detail = o.ok ? std::to_string(cmds.size()) + " CLI runs and the reduction byte-identical" : o.detail;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "MAJ3 spectrum", 0.001, maj3_spectrum},
      {2, "Parseval and Plancherel", 10, parseval_plancherel},
      {3, "BLR acceptance and soundness", 5, blr_criterion},
      {4, "NAE acceptance and dictators", 5, nae_criterion},
      {5, "Sheppard Monte Carlo", 10, sheppard_criterion},
      {6, "MAJ101 stability, W1, total influence", 60, majority_criterion},
      {7, "Inequality suites", 120, suites_criterion},
      {8, "KKMO and 3XOR testers", 30, kkmo_3xor_criterion},
      {9, "Berry-Esseen and hybrid bound", 30, clt_criterion},
      {10, "Invariance and small-ball", 120, invariance_criterion},
      {11, "ULC pipeline", 120, ulc_criterion},
      {12, "Determinism", 60, determinism_criterion},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::printf("%s %2d  %-40s %9.3fs (budget %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.c_str(), in_time ? "" : "  [over budget]");
    std::fflush(stdout);
  }
  return failures;
}
