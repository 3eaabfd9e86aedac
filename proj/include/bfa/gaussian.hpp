#pragma once

// Gaussian side of the theory: correlated normal vectors, Sheppard's formula,
// limits for majority, Gaussian noise stability of multilinear polynomials,
// rotation sensitivity and the Kindler-O'Donnell bound.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfa/core.hpp"
#include "bfa/mc.hpp"

namespace bfa {

// Q(x) = sum_S c_S prod_{i in S} x_i with S a bitmask over up to 64 variables.
class MultilinearPoly {
 public:
  MultilinearPoly(int n, std::map<std::uint64_t, double> coeffs);
  static MultilinearPoly from_spectrum(const Spectrum& s);

  int n() const { return n_; }
  const std::map<std::uint64_t, double>& coeffs() const { return coeffs_; }

  double operator()(std::span<const double> x) const;
  // Coefficients laid out as a dense spectrum; n must fit a table.
  Spectrum to_spectrum() const;

 private:
  int n_;
  std::map<std::uint64_t, double> coeffs_;
  std::vector<std::pair<std::uint64_t, double>> terms_;  // flat copy for evaluation
};

// Predicate on R^n with values +/-1.
struct GaussianPredicate {
  int n = 1;
  std::function<int(std::span<const double>)> fn;
  std::string name;
};

GaussianPredicate sign_of(const MultilinearPoly& q);
GaussianPredicate halfspace(std::vector<double> a);

double normal_cdf(double x);

// Fills g, h with rho-correlated standard Gaussian vectors: h = rho g + sqrt(1-rho^2) g'.
void correlated_gaussians(Rng& rng, std::span<double> g, std::span<double> h, double rho);

// sup_x |F_n(x) - cdf(x)| for the empirical distribution of `samples`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Pr[sgn G != sgn H] = arccos(rho) / pi.
double sheppard(double rho);
McReport sheppard_mc(double rho, const McParams& params);

// lim_n Stab_rho(MAJ_n) = 1 - (2/pi) arccos(rho).
double maj_stab_limit(double rho);
// lim_n W^k(MAJ_n) = C(k-1, (k-1)/2) 4 / (pi k 2^k), k odd.
double wk_maj_limit(int k);

// sum_S rho^|S| c_S^2
double gstab(const MultilinearPoly& q, double rho);
McReport gstab_mc(const MultilinearPoly& q, double rho, const McParams& params);
// E[f(G) f(H)] for a predicate.
McReport gstab_mc(const GaussianPredicate& f, double rho, const McParams& params);

// Pr[f(G) != f(H)] with H = cos(delta) G + sin(delta) G'.
McReport rotation_sensitivity_mc(const GaussianPredicate& f, double delta, const McParams& params);

// Tolerance on |E f| under which a predicate counts as balanced.
inline constexpr double kBalanceTolerance = 0.02;

struct KoReport {
  int ell = 2;
  double delta = 0.0;  // pi / (2 ell)
  double bound = 0.0;  // 1 / (2 ell)
  McReport rs;
  McReport mean;  // E f, from an independent stream
  bool balanced = true;
  double margin = 0.0;  // rs.estimate - bound
  bool holds = true;    // balanced and margin >= -4 stderr
};

KoReport ko_bound_check(const GaussianPredicate& f, int ell, const McParams& params);

// (U_rho Q)(x) = E[Q(rho x + sqrt(1-rho^2) G)].
McReport ornstein_uhlenbeck_mc(const MultilinearPoly& q, double rho, std::span<const double> x,
                               const McParams& params);
// Exact value sum_S c_S rho^|S| prod_{i in S} x_i.
double ornstein_uhlenbeck(const MultilinearPoly& q, double rho, std::span<const double> x);

}  // namespace bfa
