#pragma once

// Dense representations of functions on the hypercube {-1,1}^n and their
// Fourier spectra.
//
// Index convention, used everywhere in the library: bit i of an input
// bitmask x is variable x_{i+1}, and bit value b stands for the point
// (-1)^b. Subsets S of [n] use the same bit layout, so the character
// chi_S(x) equals (-1)^{popcount(S & x)}.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bfa {

using Mask = std::uint32_t;

inline constexpr int kMaxTableVars = 26;

inline int chi(Mask set, Mask x) { return (std::popcount(set & x) & 1) ? -1 : 1; }

void check_table_vars(int n);

// A +/-1-valued function, one sign bit per input (bit set <=> f(x) = -1).
class TruthTable {
 public:
  explicit TruthTable(int n);  // constant +1

  template <class Fn>
  static TruthTable from_predicate(int n, Fn&& value_at) {
    TruthTable t(n);
    for (std::size_t x = 0; x < t.size(); ++x) {
      if (value_at(static_cast<Mask>(x)) < 0) t.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return t;
  }

  static TruthTable from_words(int n, std::vector<std::uint64_t> words);

  int n() const { return n_; }
  std::size_t size() const { return std::size_t{1} << n_; }

  int operator()(Mask x) const { return bit(x) ? -1 : 1; }
  bool bit(Mask x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }

  std::span<const std::uint64_t> words() const { return words_; }

  // Number of inputs with f(x) = -1.
  std::size_t count_minus() const;

  TruthTable negated() const;
  TruthTable with_flipped(Mask x) const;

  bool operator==(const TruthTable&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

// A real-valued function on the cube.
class RealTable {
 public:
  explicit RealTable(int n);  // all zeros
  RealTable(int n, std::vector<double> values);

  template <class Fn>
  static RealTable from_function(int n, Fn&& value_at) {
    RealTable t(n);
    for (std::size_t x = 0; x < t.size(); ++x) t.values_[x] = value_at(static_cast<Mask>(x));
    return t;
  }

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double operator[](Mask x) const { return values_[x]; }
  std::span<const double> values() const { return values_; }

  bool operator==(const RealTable&) const = default;

 private:
  int n_;
  std::vector<double> values_;
};

RealTable to_real(const TruthTable& f);

// Thresholds at zero: values < 0 become -1, everything else +1.
TruthTable sign_of(const RealTable& f);

// All 2^n Fourier coefficients, coeffs[S] = f^(S).
class Spectrum {
 public:
  Spectrum(int n, std::vector<double> coeffs);

  int n() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](Mask set) const { return coeffs_[set]; }
  std::span<const double> coeffs() const { return coeffs_; }

 private:
  int n_;
  std::vector<double> coeffs_;
};

struct SpectralSummary {
  double mean = 0.0;
  double variance = 0.0;
  int degree = 0;
  std::vector<double> level_weights;  // W^0 .. W^n
};

inline constexpr double kDegreeTolerance = 1e-9;

Spectrum wht(const TruthTable& f);
Spectrum wht(const RealTable& f);
RealTable inverse_wht(const Spectrum& s);

SpectralSummary summary(const Spectrum& s);

// Spectrum with each coefficient multiplied by factor[|S|] (factor has n+1 entries).
Spectrum scale_levels(const Spectrum& s, std::span<const double> factor);

// Powers rho^0 .. rho^n, the per-level multipliers of the noise operator.
std::vector<double> level_powers(double rho, int n);

double inner_product(const RealTable& f, const RealTable& g);
double inner_product(const TruthTable& f, const TruthTable& g);
double distance(const TruthTable& f, const TruthTable& g);

// sum_S f^(S) g^(S)
double spectral_inner_product(const Spectrum& f, const Spectrum& g);

}  // namespace bfa
