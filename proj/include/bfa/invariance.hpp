#pragma once

// Quantitative central limit experiments: smooth threshold functions, exact
// CDFs of Rademacher sums, Berry-Esseen gaps, the hybrid argument, the
// invariance gap for low-degree polynomials and Gaussian small-ball bounds.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfa/gaussian.hpp"
#include "bfa/mc.hpp"

namespace bfa {

// B = E[X^4] / E[X^2]^2
double reasonable_constant(double m2, double m4);

// psi(x) = 1 - s((x - (t - 2 lambda)) / (4 lambda)) where s is the degree-9
// smoothstep 126u^5 - 420u^6 + 540u^7 - 315u^8 + 70u^9 clamped to [0,1].
// So psi = 1 for x <= t - 2 lambda, psi = 0 for x >= t + 2 lambda, and psi
// has four continuous derivatives.
class SmoothThreshold {
 public:
  // max_{[0,1]} |s''''| / 4^4.
  static constexpr double kB4 = 622.53273550542415570 / 256.0;

  SmoothThreshold(double t, double lambda);

  double t() const { return t_; }
  double lambda() const { return lambda_; }
  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;  // order 0..4
  // Certified bound on |psi''''|.
  double m4() const;

 private:
  double t_;
  double lambda_;
};

// Weights a_1..a_n rescaled so that sum a_i^2 = 1.
class WeightedSum {
 public:
  explicit WeightedSum(std::vector<double> weights);
  static WeightedSum equal(int n);

  int n() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  bool equal_magnitudes() const;
  double fourth_power_sum() const;  // sum a_i^4
  double max_square() const;        // max a_i^2

 private:
  std::vector<double> weights_;
};

inline constexpr int kMaxEnumeratedWeights = 24;

// Law of sum a_i x_i over uniform signs, as sorted atoms (value, probability).
struct DiscreteLaw {
  std::vector<std::pair<double, double>> atoms;
  std::vector<double> cumulative;  // cumulative[j] = Pr[X <= atoms[j].first]

  // Sorts, merges values within 1e-12 and accumulates.
  static DiscreteLaw from_atoms(std::vector<std::pair<double, double>> atoms);

  double cdf(double t) const;  // Pr[X <= t]
  double expect(const SmoothThreshold& psi) const;
};

// Equal magnitudes use the binomial law (any n); otherwise n <= 24 is enumerated.
DiscreteLaw rademacher_law(const WeightedSum& w);
double rademacher_cdf_exact(const WeightedSum& w, double t);

struct BerryEsseenReport {
  double gap = 0.0;        // sup_t |F_S(t) - Phi(t)|
  double at = 0.0;         // where the sup is attained
  double epsilon = 0.0;    // (sum a_i^4)^{1/2}
  double ratio = 0.0;      // gap / epsilon
  double tau = 0.0;        // max a_i^2
  double weak_bound = 0.0;  // tau^{1/5}, constant unspecified
};

// Sup over a grid on [-8, 8] with the given step plus every atom of S.
BerryEsseenReport berry_esseen_gap(const WeightedSum& w, double step = 1e-3);

// E[psi(G)] by Gauss-Legendre quadrature over the ramp.
double gaussian_expectation(const SmoothThreshold& psi);

struct HybridReport {
  double smooth_rademacher = 0.0;  // E psi(S)
  double smooth_gaussian = 0.0;    // E psi(G)
  double gap = 0.0;
  double bound = 0.0;  // M4 sum a_i^4
  bool exact = true;   // E psi(S) enumerated rather than sampled
  std::optional<McReport> mc;
};

// E psi(S) is exact when the law is enumerable, otherwise sampled with `params`.
HybridReport hybrid_smooth_gap(const WeightedSum& w, const SmoothThreshold& psi, const McParams& params);

// sqrt(2/(n(n-1))) sum_{i<j} x_i x_j
MultilinearPoly pairwise_sum(int n);

inline constexpr int kMaxExactInvarianceVars = 20;

struct InvarianceReport {
  double gap = 0.0;  // sup_t |F_{Q(X)}(t) - F_{Q(G)}(t)|
  double tau = 0.0;  // max_i Inf_i(Q)
  int degree = 0;
  double reference = 0.0;  // d (10^d tau)^{1/(4d+1)}, constant unspecified
  bool rademacher_exact = true;
  std::uint64_t samples = 0;
};

// The Gaussian side is always sampled; the Rademacher side is exact for n <= 20.
InvarianceReport invariance_gap(const MultilinearPoly& q, const McParams& params);

struct SmallBallRow {
  double eps = 0.0;
  McReport probability;  // Pr[|Q(G) - t| <= eps]
  double ratio = 0.0;    // probability / (d (eps / ||Q||_2)^{1/d})
};

struct CarberyWrightReport {
  int degree = 0;
  double center = 0.0;
  std::vector<SmallBallRow> rows;
  double fitted_c = 0.0;  // largest ratio
  bool monotone = true;   // probabilities non-decreasing in eps
};

CarberyWrightReport carbery_wright_mc(const MultilinearPoly& q, std::vector<double> eps, const McParams& params,
                                      double center = 0.0);

// Batch experiments for the CSV runner.
struct ExperimentConfig {
  std::string experiment;  // be, hybrid, invariance
  std::vector<int> ns;
  McParams mc;
  double t = 0.0;
  double lambda = 0.5;
};

struct ExperimentRow {
  std::string experiment;
  double x = 0.0;  // n
  double gap = 0.0;
  double bound = 0.0;
};

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace bfa
