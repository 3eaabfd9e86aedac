#include "bfa/operators.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "bfa/error.hpp"
#include "bfa/kernels.hpp"

namespace bfa {
namespace {

void check_index(int i, int n) {
  if (i < 1 || i > n) throw DomainError("variable index " + std::to_string(i) + " outside [1," + std::to_string(n) + "]");
}

// Bits at positions whose bit i is 0, for i < 6.
constexpr std::uint64_t kLowHalf[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

}  // namespace

void check_rho(double rho, double lo, double hi) {
  if (!(rho >= lo && rho <= hi)) {
    throw DomainError("rho = " + std::to_string(rho) + " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
}

RealTable derivative(const RealTable& f, int i) {
  check_index(i, f.n());
  const Mask bit = Mask{1} << (i - 1);
  return RealTable::from_function(f.n(), [&](Mask x) { return 0.5 * (f[x & ~bit] - f[x | bit]); });
}

RealTable derivative(const TruthTable& f, int i) { return derivative(to_real(f), i); }

InfluenceProfile influences(const TruthTable& f) {
  InfluenceProfile out;
  const auto words = f.words();
  const double scale = 2.0 / static_cast<double>(f.size());
  for (int i = 0; i < f.n(); ++i) {
    std::size_t pairs = 0;
    if (i < 6) {
      const unsigned shift = 1u << i;
      for (std::uint64_t w : words) pairs += static_cast<std::size_t>(std::popcount((w ^ (w >> shift)) & kLowHalf[i]));
    } else {
      const std::size_t stride = std::size_t{1} << (i - 6);
      for (std::size_t j = 0; j < words.size(); ++j) {
        if (!(j & stride)) pairs += static_cast<std::size_t>(std::popcount(words[j] ^ words[j | stride]));
      }
    }
    out.per_var.push_back(scale * static_cast<double>(pairs));
    out.total += out.per_var.back();
  }
  return out;
}

InfluenceProfile influences(const RealTable& f) {
  InfluenceProfile out;
  for (int i = 1; i <= f.n(); ++i) {
    const RealTable d = derivative(f, i);
    out.per_var.push_back(inner_product(d, d));
    out.total += out.per_var.back();
  }
  return out;
}

InfluenceProfile influences(const Spectrum& s) {
  InfluenceProfile out;
  out.per_var.assign(static_cast<std::size_t>(s.n()), 0.0);
  for (std::size_t set = 1; set < s.size(); ++set) {
    const double w = s.coeffs()[set] * s.coeffs()[set];
    for (std::size_t rest = set; rest; rest &= rest - 1) out.per_var[static_cast<std::size_t>(std::countr_zero(rest))] += w;
  }
  for (double v : out.per_var) out.total += v;
  return out;
}

double total_influence(const Spectrum& s) {
  const SpectralSummary sum = summary(s);
  double total = 0.0;
  for (std::size_t k = 1; k < sum.level_weights.size(); ++k) total += static_cast<double>(k) * sum.level_weights[k];
  return total;
}

double noisy_influence(const Spectrum& s, int i, double rho) {
  check_index(i, s.n());
  check_rho(rho, 0.0, 1.0);
  const auto power = level_powers(rho, s.n());
  const Mask bit = Mask{1} << (i - 1);
  double total = 0.0;
  for (std::size_t set = 0; set < s.size(); ++set) {
    if (set & bit) total += power[static_cast<std::size_t>(std::popcount(set)) - 1] * s.coeffs()[set] * s.coeffs()[set];
  }
  return total;
}

std::vector<double> noisy_influences(const Spectrum& s, double rho) {
  check_rho(rho, 0.0, 1.0);
  const auto power = level_powers(rho, s.n());
  std::vector<double> out(static_cast<std::size_t>(s.n()), 0.0);
  for (std::size_t set = 1; set < s.size(); ++set) {
    const double w = power[static_cast<std::size_t>(std::popcount(set)) - 1] * s.coeffs()[set] * s.coeffs()[set];
    for (std::size_t rest = set; rest; rest &= rest - 1) out[static_cast<std::size_t>(std::countr_zero(rest))] += w;
  }
  return out;
}

RealTable noise_operator(const RealTable& f, double rho) {
  check_rho(rho);
  return inverse_wht(scale_levels(wht(f), level_powers(rho, f.n())));
}

RealTable noise_operator(const TruthTable& f, double rho) { return noise_operator(to_real(f), rho); }

double stability(const Spectrum& s, double rho) {
  check_rho(rho);
  const SpectralSummary sum = summary(s);
  double total = 0.0;
  for (std::size_t k = 0; k < sum.level_weights.size(); ++k) {
    total += std::pow(rho, static_cast<double>(k)) * sum.level_weights[k];
  }
  return total;
}

double stability(const TruthTable& f, double rho) { return stability(wht(f), rho); }

McReport stability_mc(const Oracle& f, double rho, const McParams& params) {
  check_rho(rho);
  check_samples(params);
  Rng rng(params.seed);
  std::vector<std::uint64_t> x(f.words()), y(f.words());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    sample_uniform(rng, x, f.n());
    sample_correlated(rng, x, y, f.n(), rho);
    acc.add(static_cast<double>(f(x) * f(y)));
  }
  return acc.report(params.seed);
}

RealTable convolve(const RealTable& f, const RealTable& g) {
  if (f.n() != g.n()) throw DomainError("convolve: variable counts differ");
  const Spectrum fs = wht(f);
  const Spectrum gs = wht(g);
  std::vector<double> prod(fs.size());
  kernels::active().mul(prod.data(), fs.coeffs().data(), gs.coeffs().data(), prod.size());
  return inverse_wht(Spectrum(f.n(), std::move(prod)));
}

CorrelatedPair correlated_pair(int n, double rho, std::uint64_t seed) {
  check_table_vars(n);
  check_rho(rho);
  Rng rng(seed);
  std::uint64_t x = 0, y = 0;
  sample_uniform(rng, std::span<std::uint64_t>(&x, 1), n);
  sample_correlated(rng, std::span<const std::uint64_t>(&x, 1), std::span<std::uint64_t>(&y, 1), n, rho);
  return CorrelatedPair{static_cast<Mask>(x), static_cast<Mask>(y), rho};
}

double edge_weight(Mask x, Mask y, double rho, int n) {
  check_rho(rho);
  const int d = std::popcount(x ^ y);
  return std::ldexp(1.0, -n) * std::pow(0.5 - 0.5 * rho, d) * std::pow(0.5 + 0.5 * rho, n - d);
}

}  // namespace bfa
