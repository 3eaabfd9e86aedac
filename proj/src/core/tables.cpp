#include "bfa/core.hpp"

#include <cmath>
#include <string>

#include "bfa/error.hpp"
#include "bfa/kernels.hpp"

namespace bfa {
namespace {

std::size_t word_count(int n) { return ((std::size_t{1} << n) + 63) / 64; }

void check_same_n(int a, int b) {
  if (a != b) {
    throw DomainError("variable counts differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

void check_table_vars(int n) {
  if (n < 0 || n > kMaxTableVars) {
    throw CapacityError("dense tables need 0 <= n <= " + std::to_string(kMaxTableVars) + ", got " +
                        std::to_string(n));
  }
}

TruthTable::TruthTable(int n) : n_(n) {
  check_table_vars(n);
  words_.assign(word_count(n), 0);
}

TruthTable TruthTable::from_words(int n, std::vector<std::uint64_t> words) {
  TruthTable t(n);
  if (words.size() != t.words_.size()) throw DomainError("packed table has the wrong word count");
  if (n < 6) {
    const std::uint64_t used = (std::uint64_t{1} << (std::size_t{1} << n)) - 1;
    if (words[0] & ~used) throw DomainError("packed table has bits beyond 2^n");
  }
  t.words_ = std::move(words);
  return t;
}

std::size_t TruthTable::count_minus() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

TruthTable TruthTable::negated() const {
  TruthTable t = *this;
  for (auto& w : t.words_) w = ~w;
  if (n_ < 6) t.words_[0] &= (std::uint64_t{1} << (std::size_t{1} << n_)) - 1;
  return t;
}

TruthTable TruthTable::with_flipped(Mask x) const {
  TruthTable t = *this;
  t.words_[x >> 6] ^= std::uint64_t{1} << (x & 63);
  return t;
}

RealTable::RealTable(int n) : n_(n) {
  check_table_vars(n);
  values_.assign(std::size_t{1} << n, 0.0);
}

RealTable::RealTable(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_table_vars(n);
  if (values_.size() != (std::size_t{1} << n)) {
    throw DomainError("real table needs exactly 2^n values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("real table contains a non-finite value");
  }
}

RealTable to_real(const TruthTable& f) {
  std::vector<double> values(f.size());
  kernels::active().unpack_signs(f.words().data(), values.data(), values.size());
  return RealTable(f.n(), std::move(values));
}

TruthTable sign_of(const RealTable& f) {
  return TruthTable::from_predicate(f.n(), [&](Mask x) { return f[x] < 0.0 ? -1 : 1; });
}

Spectrum::Spectrum(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_table_vars(n);
  if (coeffs_.size() != (std::size_t{1} << n)) throw DomainError("spectrum needs exactly 2^n coefficients");
}

Spectrum wht(const RealTable& f) {
  std::vector<double> data(f.values().begin(), f.values().end());
  kernels::active().wht(data.data(), static_cast<unsigned>(f.n()));
  // 2^-n is exact in binary, so the scaling adds no rounding.
  const double scale = std::ldexp(1.0, -f.n());
  for (double& c : data) c *= scale;
  return Spectrum(f.n(), std::move(data));
}

Spectrum wht(const TruthTable& f) { return wht(to_real(f)); }

RealTable inverse_wht(const Spectrum& s) {
  std::vector<double> data(s.coeffs().begin(), s.coeffs().end());
  kernels::active().wht(data.data(), static_cast<unsigned>(s.n()));
  return RealTable(s.n(), std::move(data));
}

SpectralSummary summary(const Spectrum& s) {
  SpectralSummary out;
  out.level_weights.assign(static_cast<std::size_t>(s.n()) + 1, 0.0);
  kernels::active().level_weights(s.coeffs().data(), static_cast<unsigned>(s.n()), out.level_weights.data());
  out.mean = s[0];
  for (std::size_t k = 1; k < out.level_weights.size(); ++k) out.variance += out.level_weights[k];
  for (std::size_t set = 0; set < s.size(); ++set) {
    if (std::abs(s.coeffs()[set]) > kDegreeTolerance) {
      out.degree = std::max(out.degree, std::popcount(set));
    }
  }
  return out;
}

std::vector<double> level_powers(double rho, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = std::pow(rho, k);
  return out;
}

Spectrum scale_levels(const Spectrum& s, std::span<const double> factor) {
  if (factor.size() != static_cast<std::size_t>(s.n()) + 1) throw DomainError("need n+1 level factors");
  std::vector<double> data(s.coeffs().begin(), s.coeffs().end());
  kernels::active().scale_by_level(data.data(), static_cast<unsigned>(s.n()), factor.data());
  return Spectrum(s.n(), std::move(data));
}

double inner_product(const RealTable& f, const RealTable& g) {
  check_same_n(f.n(), g.n());
  return kernels::active().dot(f.values().data(), g.values().data(), f.size()) / static_cast<double>(f.size());
}

double inner_product(const TruthTable& f, const TruthTable& g) {
  check_same_n(f.n(), g.n());
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < f.words().size(); ++i) {
    disagree += static_cast<std::size_t>(std::popcount(f.words()[i] ^ g.words()[i]));
  }
  return 1.0 - 2.0 * static_cast<double>(disagree) / static_cast<double>(f.size());
}

double distance(const TruthTable& f, const TruthTable& g) { return (1.0 - inner_product(f, g)) / 2.0; }

double spectral_inner_product(const Spectrum& f, const Spectrum& g) {
  check_same_n(f.n(), g.n());
  return kernels::active().dot(f.coeffs().data(), g.coeffs().data(), f.size());
}

}  // namespace bfa
