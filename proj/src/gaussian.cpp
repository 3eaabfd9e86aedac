#include "bfa/gaussian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "bfa/error.hpp"
#include "bfa/operators.hpp"

namespace bfa {

MultilinearPoly::MultilinearPoly(int n, std::map<std::uint64_t, double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  if (n < 1 || n > 64) throw DomainError("multilinear polynomial needs 1 <= n <= 64");
  for (const auto& [set, c] : coeffs_) {
    if (n < 64 && (set >> n)) throw DomainError("coefficient mask uses a variable beyond n");
    if (!std::isfinite(c)) throw DomainError("non-finite coefficient");
  }
  terms_.assign(coeffs_.begin(), coeffs_.end());
}

MultilinearPoly MultilinearPoly::from_spectrum(const Spectrum& s) {
  std::map<std::uint64_t, double> coeffs;
  for (std::size_t set = 0; set < s.size(); ++set) {
    if (s.coeffs()[set] != 0.0) coeffs.emplace(set, s.coeffs()[set]);
  }
  return MultilinearPoly(s.n(), std::move(coeffs));
}

double MultilinearPoly::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw DomainError("point dimension does not match polynomial");
  double total = 0.0;
  for (const auto& [set, c] : terms_) {
    double term = c;
    for (std::uint64_t rest = set; rest; rest &= rest - 1) term *= x[static_cast<std::size_t>(std::countr_zero(rest))];
    total += term;
  }
  return total;
}

Spectrum MultilinearPoly::to_spectrum() const {
  check_table_vars(n_);
  std::vector<double> dense(std::size_t{1} << n_, 0.0);
  for (const auto& [set, c] : coeffs_) dense[set] = c;
  return Spectrum(n_, std::move(dense));
}

GaussianPredicate sign_of(const MultilinearPoly& q) {
  return {q.n(), [q](std::span<const double> x) { return q(x) >= 0.0 ? 1 : -1; }, "sign"};
}

GaussianPredicate halfspace(std::vector<double> a) {
  if (a.empty()) throw DomainError("halfspace needs at least one weight");
  const int n = static_cast<int>(a.size());
  return {n,
          [a = std::move(a)](std::span<const double> x) {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * x[i];
            return dot >= 0.0 ? 1 : -1;
          },
          "halfspace"};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

void correlated_gaussians(Rng& rng, std::span<double> g, std::span<double> h, double rho) {
  const double tail = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = rng.normal();
    h[i] = rho * g[i] + tail * rng.normal();
  }
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return worst;
}

double sheppard(double rho) {
  check_rho(rho);
  return std::acos(rho) / std::numbers::pi;
}

McReport sheppard_mc(double rho, const McParams& params) {
  check_rho(rho);
  check_samples(params);
  Rng rng(params.seed);
  double g = 0.0, h = 0.0;
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    correlated_gaussians(rng, {&g, 1}, {&h, 1}, rho);
    acc.add((g >= 0.0) != (h >= 0.0) ? 1.0 : 0.0);
  }
  return acc.report(params.seed);
}

double maj_stab_limit(double rho) { return 1.0 - 2.0 * sheppard(rho); }

double wk_maj_limit(int k) {
  if (k < 1 || k % 2 == 0) throw DomainError("wk_maj_limit: k must be odd and positive");
  const int m = (k - 1) / 2;
  const double log_binom = std::lgamma(k) - 2.0 * std::lgamma(m + 1);
  return std::exp(log_binom - k * std::numbers::ln2) * 4.0 / (std::numbers::pi * k);
}

double gstab(const MultilinearPoly& q, double rho) {
  check_rho(rho);
  double total = 0.0;
  for (const auto& [set, c] : q.coeffs()) total += std::pow(rho, std::popcount(set)) * c * c;
  return total;
}

namespace {

template <class Fn>
McReport correlated_mc(int n, double rho, const McParams& params, Fn&& value) {
  check_samples(params);
  Rng rng(params.seed);
  std::vector<double> g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    correlated_gaussians(rng, g, h, rho);
    acc.add(value(g, h));
  }
  return acc.report(params.seed);
}

}  // namespace

McReport gstab_mc(const MultilinearPoly& q, double rho, const McParams& params) {
  check_rho(rho);
  return correlated_mc(q.n(), rho, params, [&](const auto& g, const auto& h) { return q(g) * q(h); });
}

McReport gstab_mc(const GaussianPredicate& f, double rho, const McParams& params) {
  check_rho(rho);
  return correlated_mc(f.n, rho, params, [&](const auto& g, const auto& h) { return double(f.fn(g) * f.fn(h)); });
}

McReport rotation_sensitivity_mc(const GaussianPredicate& f, double delta, const McParams& params) {
  if (!(delta >= 0.0 && delta <= std::numbers::pi)) throw DomainError("rotation sensitivity needs delta in [0, pi]");
  return correlated_mc(f.n, std::cos(delta), params,
                       [&](const auto& g, const auto& h) { return f.fn(g) != f.fn(h) ? 1.0 : 0.0; });
}

KoReport ko_bound_check(const GaussianPredicate& f, int ell, const McParams& params) {
  if (ell < 2) throw DomainError("ko_bound_check: ell must be at least 2");
  check_samples(params);
  KoReport out;
  out.ell = ell;
  out.delta = std::numbers::pi / (2.0 * ell);
  out.bound = 1.0 / (2.0 * ell);
  out.rs = rotation_sensitivity_mc(f, out.delta, params);

  Rng rng(params.seed, 1);
  std::vector<double> g(static_cast<std::size_t>(f.n));
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    for (auto& v : g) v = rng.normal();
    acc.add(f.fn(g));
  }
  out.mean = acc.report(params.seed);
  out.balanced = std::abs(out.mean.estimate) <= kBalanceTolerance;
  out.margin = out.rs.estimate - out.bound;
  out.holds = out.balanced && out.margin >= -4.0 * out.rs.std_error;
  return out;
}

McReport ornstein_uhlenbeck_mc(const MultilinearPoly& q, double rho, std::span<const double> x,
                               const McParams& params) {
  check_rho(rho);
  check_samples(params);
  if (x.size() != static_cast<std::size_t>(q.n())) throw DomainError("point dimension does not match polynomial");
  const double tail = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  Rng rng(params.seed);
  std::vector<double> y(x.size());
  MeanAccumulator acc;
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rho * x[i] + tail * rng.normal();
    acc.add(q(y));
  }
  return acc.report(params.seed);
}

double ornstein_uhlenbeck(const MultilinearPoly& q, double rho, std::span<const double> x) {
  check_rho(rho);
  std::vector<double> scaled(x.begin(), x.end());
  for (auto& v : scaled) v *= rho;
  return q(scaled);
}

}  // namespace bfa
