#include "bfa/symmetric.hpp"

#include <cmath>

#include "bfa/error.hpp"

namespace bfa {
namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

SymmetricSpectrum::SymmetricSpectrum(int n, std::vector<double> coeff, std::vector<double> level_weight)
    : n_(n), coeff_(std::move(coeff)), weight_(std::move(level_weight)) {
  if (n < 1 || coeff_.size() != static_cast<std::size_t>(n) + 1 || weight_.size() != coeff_.size()) {
    throw DomainError("symmetric spectrum needs n+1 levels");
  }
}

double SymmetricSpectrum::stability(double rho) const {
  double total = 0.0;
  for (int k = 0; k <= n_; ++k) total += std::pow(rho, k) * weight_[static_cast<std::size_t>(k)];
  return total;
}

// Inf_i = sum_{S containing i} f^(S)^2 = sum_k (k/n) W^k.
double SymmetricSpectrum::influence() const { return noisy_influence(1.0); }

double SymmetricSpectrum::noisy_influence(double rho) const {
  double total = 0.0;
  for (int k = 1; k <= n_; ++k) {
    total += static_cast<double>(k) / n_ * std::pow(rho, k - 1) * weight_[static_cast<std::size_t>(k)];
  }
  return total;
}

SymmetricSpectrum majority_spectrum(int n) {
  if (n < 1 || n % 2 == 0) throw DomainError("majority needs odd n, got " + std::to_string(n));
  const int m = (n - 1) / 2;
  std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> weight(coeff.size(), 0.0);
  const double log_central = log_choose(n - 1, m) - (n - 1) * std::log(2.0);
  for (int k = 1; k <= n; k += 2) {
    const int j = (k - 1) / 2;
    const double log_abs = log_choose(m, j) - log_choose(n - 1, k - 1) + log_central;
    coeff[static_cast<std::size_t>(k)] = (j % 2 ? -1.0 : 1.0) * std::exp(log_abs);
    weight[static_cast<std::size_t>(k)] = std::exp(log_choose(n, k) + 2.0 * log_abs);
  }
  return SymmetricSpectrum(n, std::move(coeff), std::move(weight));
}

SymmetricSpectrum symmetric_spectrum(const Spectrum& s, double tol) {
  const int n = s.n();
  std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<bool> seen(coeff.size(), false);
  std::vector<double> weight(coeff.size(), 0.0);
  for (std::size_t set = 0; set < s.size(); ++set) {
    const auto k = static_cast<std::size_t>(std::popcount(set));
    const double c = s.coeffs()[set];
    if (!seen[k]) {
      coeff[k] = c;
      seen[k] = true;
    } else if (std::abs(c - coeff[k]) > tol) {
      throw DomainError("function is not symmetric");
    }
    weight[k] += c * c;
  }
  return SymmetricSpectrum(n, std::move(coeff), std::move(weight));
}

}  // namespace bfa
