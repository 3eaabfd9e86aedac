#pragma once

// Derivatives, influences, the noise operator T_rho, noise stability,
// convolution and rho-correlated sampling.

#include <vector>

#include "bfa/core.hpp"
#include "bfa/mc.hpp"

namespace bfa {

struct InfluenceProfile {
  std::vector<double> per_var;  // Inf_1 .. Inf_n
  double total = 0.0;
};

struct CorrelatedPair {
  Mask x = 0;
  Mask y = 0;
  double rho = 0.0;
};

void check_rho(double rho, double lo = -1.0, double hi = 1.0);

// (D_i f)(x) = (f(x^{i<-1}) - f(x^{i<--1})) / 2, i is 1-based.
RealTable derivative(const RealTable& f, int i);
RealTable derivative(const TruthTable& f, int i);

// Fraction of inputs where flipping x_i changes f, counted directly on the
// packed table.
InfluenceProfile influences(const TruthTable& f);
// E[(D_i f)^2] for real-valued f.
InfluenceProfile influences(const RealTable& f);
// sum_{S containing i} f^(S)^2.
InfluenceProfile influences(const Spectrum& s);

// sum_S |S| f^(S)^2
double total_influence(const Spectrum& s);

// Inf_i^(rho)(f) = sum_{S containing i} rho^{|S|-1} f^(S)^2, rho in [0,1].
double noisy_influence(const Spectrum& s, int i, double rho);
std::vector<double> noisy_influences(const Spectrum& s, double rho);

// T_rho f, computed by scaling f^(S) by rho^|S| and transforming back.
RealTable noise_operator(const RealTable& f, double rho);
RealTable noise_operator(const TruthTable& f, double rho);

// Stab_rho(f) = sum_S rho^|S| f^(S)^2.
double stability(const Spectrum& s, double rho);
double stability(const TruthTable& f, double rho);

// E[f(x) f(y)] over rho-correlated (x, y).
McReport stability_mc(const Oracle& f, double rho, const McParams& params);

// (f * g)(x) = E_y[f(y) g(x + y)], via f^(S) g^(S).
RealTable convolve(const RealTable& f, const RealTable& g);

CorrelatedPair correlated_pair(int n, double rho, std::uint64_t seed);

// Probability of drawing the ordered pair (x, y): 2^-n (1/2-rho/2)^d (1/2+rho/2)^(n-d), d = Hamming distance.
double edge_weight(Mask x, Mask y, double rho, int n);

}  // namespace bfa
