#pragma once

// Spectra of symmetric functions, where f^(S) depends only on |S|. These let
// the spectral formulas run at n far beyond the dense-table cap, e.g. the
// majority function on 101 variables.

#include <vector>

#include "bfa/core.hpp"

namespace bfa {

class SymmetricSpectrum {
 public:
  // coeff[k] is the common value of f^(S) over |S| = k, k = 0..n.
  SymmetricSpectrum(int n, std::vector<double> coeff, std::vector<double> level_weight);

  int n() const { return n_; }
  double coefficient(int k) const { return coeff_[static_cast<std::size_t>(k)]; }
  double level_weight(int k) const { return weight_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& level_weights() const { return weight_; }

  double mean() const { return coeff_[0]; }
  double stability(double rho) const;
  // Every variable has the same (noisy) influence.
  double influence() const;
  double noisy_influence(double rho) const;
  double total_influence() const { return influence() * n_; }

 private:
  int n_;
  std::vector<double> coeff_;
  std::vector<double> weight_;
};

// Closed form: for odd |S| = k = 2j+1 and m = (n-1)/2,
//   MAJ^(S) = (-1)^j C(m, j) / C(n-1, k-1) * C(n-1, m) 2^-(n-1),
// and zero for even |S|.
SymmetricSpectrum majority_spectrum(int n);

// Reads a symmetric function's spectrum off a dense spectrum (one coefficient
// per level); throws if the coefficients within a level differ by more than tol.
SymmetricSpectrum symmetric_spectrum(const Spectrum& s, double tol = 1e-12);

}  // namespace bfa
