#include "bfa/testers.hpp"

#include <algorithm>
#include <cmath>

#include "bfa/error.hpp"
#include "bfa/kernels.hpp"
#include "bfa/operators.hpp"

namespace bfa {
namespace {

// sum_S factor[|S|] f^(S)^3
double weighted_cube_sum(const Spectrum& s, const std::vector<double>& factor) {
  const auto& k = kernels::active();
  std::vector<double> sq(s.size());
  k.mul(sq.data(), s.coeffs().data(), s.coeffs().data(), sq.size());
  const Spectrum scaled = scale_levels(s, factor);
  return k.dot(scaled.coeffs().data(), sq.data(), sq.size());
}

TestOutcome run(std::string name, std::vector<std::pair<std::string, double>> params, const TestMode& mode,
                const auto& exact, const auto& mc) {
  TestOutcome out{std::move(name), std::move(params), std::nullopt, std::nullopt};
  if (mode.exact) out.exact_accept = exact();
  if (mode.mc) out.mc = mc(*mode.mc);
  return out;
}

void xor_into(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, std::span<std::uint64_t> out) {
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = a[w] ^ b[w];
}

}  // namespace

bool TestOutcome::consistent() const {
  if (!exact_accept || !mc) return true;
  return agrees(*exact_accept, *mc);
}

void to_json(nlohmann::json& j, const TestOutcome& t) {
  j = nlohmann::json{{"test", t.test}};
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : t.params) params[key] = value;
  j["params"] = params;
  if (t.exact_accept) j["exact_accept"] = *t.exact_accept;
  if (t.mc) j["mc"] = *t.mc;
}

double blr_accept(const Spectrum& s) {
  return 0.5 + 0.5 * weighted_cube_sum(s, std::vector<double>(static_cast<std::size_t>(s.n()) + 1, 1.0));
}

McReport blr_mc(const Oracle& f, const McParams& params) {
  check_samples(params);
  Rng rng(params.seed);
  std::vector<std::uint64_t> x(f.words()), y(f.words()), z(f.words());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    sample_uniform(rng, x, f.n());
    sample_uniform(rng, y, f.n());
    xor_into(x, y, z);
    acc.add(f(x) * f(y) == f(z) ? 1.0 : 0.0);
  }
  return acc.report(params.seed);
}

TestOutcome blr(const TruthTable& f, const TestMode& mode) {
  return run("blr", {}, mode, [&] { return blr_accept(wht(f)); },
             [&](const McParams& p) { return blr_mc(Oracle::of(f), p); });
}

NearestLinear nearest_linear(const TruthTable& f) {
  const Spectrum s = wht(f);
  NearestLinear best{0, (1.0 - s[0]) / 2.0};
  for (std::size_t set = 1; set < s.size(); ++set) {
    const double dist = (1.0 - s.coeffs()[set]) / 2.0;
    if (dist < best.dist) best = {static_cast<Mask>(set), dist};
  }
  return best;
}

NearestDictator nearest_signed_dictator(const TruthTable& f) {
  const Spectrum s = wht(f);
  NearestDictator best{1, 1, 2.0};
  for (int i = 1; i <= f.n(); ++i) {
    const double c = s[Mask{1} << (i - 1)];
    for (int sign : {1, -1}) {
      const double dist = (1.0 - sign * c) / 2.0;
      if (dist < best.dist) best = {sign, i, dist};
    }
  }
  return best;
}

int local_decode(const TruthTable& f, Mask x, int trials, std::uint64_t seed) {
  if (trials < 1 || trials % 2 == 0) throw DomainError("local_decode: trials must be a positive odd number");
  if (x >= f.size()) throw DomainError("local_decode: input outside the cube");
  Rng rng(seed);
  int votes = 0;
  for (int t = 0; t < trials; ++t) {
    const auto y = static_cast<Mask>(rng.below(f.size()));
    votes += f(y) * f(x ^ y);
  }
  return votes > 0 ? 1 : -1;
}

double nae_accept(const Spectrum& s) { return 0.75 - 0.75 * stability(s, -1.0 / 3.0); }

double nae_accept(const SymmetricSpectrum& s) { return 0.75 - 0.75 * s.stability(-1.0 / 3.0); }

McReport nae_mc(const Oracle& f, const McParams& params) {
  check_samples(params);
  Rng rng(params.seed);
  std::vector<std::uint64_t> x(f.words()), y(f.words()), z(f.words());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    std::fill(x.begin(), x.end(), 0);
    std::fill(y.begin(), y.end(), 0);
    std::fill(z.begin(), z.end(), 0);
    for (int i = 0; i < f.n(); ++i) {
      // Triples 001..110: the six with not all coordinates equal.
      const std::uint64_t triple = rng.below(6) + 1;
      const std::uint64_t bit = std::uint64_t{1} << (i & 63);
      const std::size_t w = static_cast<std::size_t>(i) >> 6;
      if (triple & 1) x[w] |= bit;
      if (triple & 2) y[w] |= bit;
      if (triple & 4) z[w] |= bit;
    }
    const int a = f(x), b = f(y), c = f(z);
    acc.add(a == b && b == c ? 0.0 : 1.0);
  }
  return acc.report(params.seed);
}

TestOutcome nae_test(const TruthTable& f, const TestMode& mode) {
  return run("nae", {}, mode, [&] { return nae_accept(wht(f)); },
             [&](const McParams& p) { return nae_mc(Oracle::of(f), p); });
}

double kkmo_accept(const Spectrum& s, double rho) {
  check_rho(rho, 0.0, 1.0);
  return 0.5 + 0.5 * stability(s, rho);
}

double kkmo_accept(const SymmetricSpectrum& s, double rho) {
  check_rho(rho, 0.0, 1.0);
  return 0.5 + 0.5 * s.stability(rho);
}

McReport kkmo_mc(const Oracle& f, double rho, const McParams& params) {
  check_rho(rho, 0.0, 1.0);
  check_samples(params);
  Rng rng(params.seed);
  std::vector<std::uint64_t> x(f.words()), y(f.words());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    sample_uniform(rng, x, f.n());
    sample_correlated(rng, x, y, f.n(), rho);
    acc.add(f(x) == f(y) ? 1.0 : 0.0);
  }
  return acc.report(params.seed);
}

TestOutcome kkmo_test(const TruthTable& f, double rho, const TestMode& mode) {
  return run("kkmo", {{"rho", rho}}, mode, [&] { return kkmo_accept(wht(f), rho); },
             [&](const McParams& p) { return kkmo_mc(Oracle::of(f), rho, p); });
}

double threexor_accept(const Spectrum& s, double delta) {
  check_rho(delta, 0.0, 1.0);
  return 0.5 + 0.5 * weighted_cube_sum(s, level_powers(1.0 - delta, s.n()));
}

double threexor_accept(const SymmetricSpectrum& s, double delta) {
  check_rho(delta, 0.0, 1.0);
  // Each level contributes C(n,k) c_k^3 = W^k c_k.
  double total = 0.0;
  for (int k = 0; k <= s.n(); ++k) total += std::pow(1.0 - delta, k) * s.level_weight(k) * s.coefficient(k);
  return 0.5 + 0.5 * total;
}

McReport threexor_mc(const Oracle& f, double delta, const McParams& params) {
  check_rho(delta, 0.0, 1.0);
  check_samples(params);
  Rng rng(params.seed);
  std::vector<std::uint64_t> x(f.words()), y(f.words()), z(f.words()), xp(f.words());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    sample_uniform(rng, x, f.n());
    sample_uniform(rng, y, f.n());
    xor_into(x, y, z);
    sample_correlated(rng, x, xp, f.n(), 1.0 - delta);
    acc.add(f(xp) * f(y) * f(z) == 1 ? 1.0 : 0.0);
  }
  return acc.report(params.seed);
}

TestOutcome threexor_test(const TruthTable& f, double delta, const TestMode& mode) {
  return run("3xor", {{"delta", delta}}, mode, [&] { return threexor_accept(wht(f), delta); },
             [&](const McParams& p) { return threexor_mc(Oracle::of(f), delta, p); });
}

namespace {

void check_quasirandom_params(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon <= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw DomainError("quasirandomness: epsilon and delta must lie in (0,1]");
  }
}

}  // namespace

QuasirandomReport quasirandomness(const Spectrum& s, double epsilon, double delta) {
  check_quasirandom_params(epsilon, delta);
  QuasirandomReport out{epsilon, delta, {}, true};
  const auto noisy = noisy_influences(s, 1.0 - delta);
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] >= epsilon) out.junta.push_back(static_cast<int>(i) + 1);
  }
  out.is_quasirandom = out.junta.empty();
  return out;
}

QuasirandomReport quasirandomness(const SymmetricSpectrum& s, double epsilon, double delta) {
  check_quasirandom_params(epsilon, delta);
  QuasirandomReport out{epsilon, delta, {}, true};
  if (s.noisy_influence(1.0 - delta) >= epsilon) {
    for (int i = 1; i <= s.n(); ++i) out.junta.push_back(i);
  }
  out.is_quasirandom = out.junta.empty();
  return out;
}

}  // namespace bfa
