#include "bfa/invariance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>

#include "bfa/error.hpp"
#include "bfa/format.hpp"

namespace bfa {
namespace {

// Coefficients (lowest power first) of s and its first four derivatives.
constexpr double kRamp[5][10] = {
    {0, 0, 0, 0, 0, 126, -420, 540, -315, 70},
    {0, 0, 0, 0, 630, -2520, 3780, -2520, 630, 0},
    {0, 0, 0, 2520, -12600, 22680, -17640, 5040, 0, 0},
    {0, 0, 7560, -50400, 113400, -105840, 35280, 0, 0, 0},
    {0, 15120, -151200, 453600, -529200, 211680, 0, 0, 0, 0},
};

double horner(const double (&c)[10], double u) {
  double v = 0.0;
  for (int k = 9; k >= 0; --k) v = v * u + c[k];
  return v;
}

constexpr double kMergeTolerance = 1e-12;

// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int m) {
  std::vector<std::pair<double, double>> out;
  for (int i = 1; i <= m; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    out.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
  }
  return out;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Sup distance between two laws given as sorted samples/atoms with weights.
double sup_distance(const DiscreteLaw& a, const DiscreteLaw& b) {
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, worst = 0.0;
  while (i < a.atoms.size() || j < b.atoms.size()) {
    const double va = i < a.atoms.size() ? a.atoms[i].first : INFINITY;
    const double vb = j < b.atoms.size() ? b.atoms[j].first : INFINITY;
    const double v = std::min(va, vb);
    while (i < a.atoms.size() && a.atoms[i].first <= v) fa = a.cumulative[i++];
    while (j < b.atoms.size() && b.atoms[j].first <= v) fb = b.cumulative[j++];
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

DiscreteLaw empirical_law(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double p = 1.0 / static_cast<double>(values.size());
  DiscreteLaw law;
  law.atoms.reserve(values.size());
  law.cumulative.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    law.atoms.emplace_back(values[k], p);
    law.cumulative.push_back(static_cast<double>(k + 1) * p);
  }
  return law;
}

double nonconstant_weight(const MultilinearPoly& q) {
  double total = 0.0;
  for (const auto& [set, c] : q.coeffs()) {
    if (set) total += c * c;
  }
  return total;
}

void check_normalized(const MultilinearPoly& q) {
  if (std::abs(nonconstant_weight(q) - 1.0) > 1e-9) {
    throw DomainError("polynomial must have variance 1 (sum of non-constant c_S^2)");
  }
}

int degree_of(const MultilinearPoly& q) {
  int d = 0;
  for (const auto& [set, c] : q.coeffs()) {
    if (c != 0.0) d = std::max(d, std::popcount(set));
  }
  return d;
}

}  // namespace

double reasonable_constant(double m2, double m4) {
  if (!(m2 > 0.0)) throw DomainError("reasonable_constant needs E[X^2] > 0");
  return m4 / (m2 * m2);
}

SmoothThreshold::SmoothThreshold(double t, double lambda) : t_(t), lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda) || !std::isfinite(t)) {
    throw DomainError("smooth threshold needs finite t and lambda > 0");
  }
}

double SmoothThreshold::derivative(double x, int order) const {
  if (order < 0 || order > 4) throw DomainError("smooth threshold derivatives go up to order 4");
  const double width = 4.0 * lambda_;
  const double u = (x - (t_ - 2.0 * lambda_)) / width;
  if (u <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (u >= 1.0) return 0.0;
  const double s = horner(kRamp[order], u);
  return order == 0 ? 1.0 - s : -s / std::pow(width, order);
}

double SmoothThreshold::m4() const { return kB4 / std::pow(lambda_, 4); }

WeightedSum::WeightedSum(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("weighted sum needs at least one weight");
  double sq = 0.0;
  for (double a : weights_) {
    if (!std::isfinite(a)) throw DomainError("non-finite weight");
    sq += a * a;
  }
  if (!(sq > 0.0)) throw DomainError("weights must not all be zero");
  const double scale = 1.0 / std::sqrt(sq);
  for (double& a : weights_) a *= scale;
}

WeightedSum WeightedSum::equal(int n) {
  if (n < 1) throw DomainError("weighted sum needs n >= 1");
  return WeightedSum(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

bool WeightedSum::equal_magnitudes() const {
  const double a = std::abs(weights_[0]);
  return std::all_of(weights_.begin(), weights_.end(), [&](double w) { return std::abs(std::abs(w) - a) <= 1e-15; });
}

double WeightedSum::fourth_power_sum() const {
  double total = 0.0;
  for (double a : weights_) total += a * a * a * a;
  return total;
}

double WeightedSum::max_square() const {
  double best = 0.0;
  for (double a : weights_) best = std::max(best, a * a);
  return best;
}

DiscreteLaw DiscreteLaw::from_atoms(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  DiscreteLaw law;
  double total = 0.0;
  for (const auto& [v, p] : atoms) {
    if (!law.atoms.empty() && v - law.atoms.back().first <= kMergeTolerance) {
      law.atoms.back().second += p;
    } else {
      law.atoms.emplace_back(v, p);
      law.cumulative.push_back(0.0);
    }
    total += p;
    law.cumulative.back() = total;
  }
  return law;
}

double DiscreteLaw::cdf(double t) const {
  const auto it = std::upper_bound(atoms.begin(), atoms.end(), t + kMergeTolerance,
                                   [](double v, const auto& atom) { return v < atom.first; });
  return it == atoms.begin() ? 0.0 : cumulative[static_cast<std::size_t>(it - atoms.begin()) - 1];
}

double DiscreteLaw::expect(const SmoothThreshold& psi) const {
  double total = 0.0;
  for (const auto& [v, p] : atoms) total += p * psi(v);
  return total;
}

DiscreteLaw rademacher_law(const WeightedSum& w) {
  const int n = w.n();
  std::vector<std::pair<double, double>> atoms;
  if (w.equal_magnitudes()) {
    const double a = std::abs(w.weights()[0]);
    const double log_norm = std::lgamma(n + 1.0) - n * std::numbers::ln2;
    for (int k = n; k >= 0; --k) {  // k coordinates at -1
      const double logp = log_norm - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      atoms.emplace_back(a * (n - 2 * k), std::exp(logp));
    }
    return DiscreteLaw::from_atoms(std::move(atoms));
  }
  if (n > kMaxEnumeratedWeights) {
    throw CapacityError("exact Rademacher law needs equal weights or n <= " + std::to_string(kMaxEnumeratedWeights));
  }
  // Meet in the middle: sums over the low and high halves of the sign vector.
  auto half_sums = [&](int from, int count) {
    std::vector<double> sums(std::size_t{1} << count);
    for (std::size_t x = 0; x < sums.size(); ++x) {
      double s = 0.0;
      for (int i = 0; i < count; ++i) s += ((x >> i) & 1u) ? -w.weights()[from + i] : w.weights()[from + i];
      sums[x] = s;
    }
    return sums;
  };
  const int low_bits = n / 2;
  const auto low = half_sums(0, low_bits);
  const auto high = half_sums(low_bits, n - low_bits);
  const double p = std::ldexp(1.0, -n);
  atoms.reserve(low.size() * high.size());
  for (double h : high) {
    for (double l : low) atoms.emplace_back(l + h, p);
  }
  return DiscreteLaw::from_atoms(std::move(atoms));
}

double rademacher_cdf_exact(const WeightedSum& w, double t) { return rademacher_law(w).cdf(t); }

BerryEsseenReport berry_esseen_gap(const WeightedSum& w, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  const DiscreteLaw law = rademacher_law(w);
  BerryEsseenReport out;
  auto consider = [&](double gap, double t) {
    if (gap > out.gap) {
      out.gap = gap;
      out.at = t;
    }
  };
  for (std::size_t j = 0; j < law.atoms.size(); ++j) {
    const double v = law.atoms[j].first;
    const double phi = normal_cdf(v);
    consider(std::abs(law.cumulative[j] - phi), v);
    consider(std::abs((j ? law.cumulative[j - 1] : 0.0) - phi), v);
  }
  const auto points = static_cast<long>(std::ceil(16.0 / step));
  for (long k = 0; k <= points; ++k) {
    const double t = -8.0 + static_cast<double>(k) * step;
    consider(std::abs(law.cdf(t) - normal_cdf(t)), t);
  }
  out.epsilon = std::sqrt(w.fourth_power_sum());
  out.ratio = out.gap / out.epsilon;
  out.tau = w.max_square();
  out.weak_bound = std::pow(out.tau, 0.2);
  return out;
}

double gaussian_expectation(const SmoothThreshold& psi) {
  static const auto nodes = gauss_legendre(20);
  constexpr int kPanels = 16;
  const double lo = psi.t() - 2.0 * psi.lambda();
  const double width = 4.0 * psi.lambda() / kPanels;
  double total = normal_cdf(lo);
  for (int k = 0; k < kPanels; ++k) {
    const double mid = lo + (k + 0.5) * width;
    for (const auto& [x, wt] : nodes) {
      const double y = mid + 0.5 * width * x;
      total += 0.5 * width * wt * psi(y) * normal_pdf(y);
    }
  }
  return total;
}

HybridReport hybrid_smooth_gap(const WeightedSum& w, const SmoothThreshold& psi, const McParams& params) {
  HybridReport out;
  out.smooth_gaussian = gaussian_expectation(psi);
  if (w.equal_magnitudes() || w.n() <= kMaxEnumeratedWeights) {
    out.smooth_rademacher = rademacher_law(w).expect(psi);
  } else {
    check_samples(params);
    Rng rng(params.seed);
    MeanAccumulator acc;
    for (std::uint64_t t = 0; t < params.samples; ++t) {
      double s = 0.0;
      for (double a : w.weights()) s += (rng.bits() & 1u) ? -a : a;
      acc.add(psi(s));
    }
    out.mc = acc.report(params.seed);
    out.smooth_rademacher = out.mc->estimate;
    out.exact = false;
  }
  out.gap = std::abs(out.smooth_rademacher - out.smooth_gaussian);
  out.bound = psi.m4() * w.fourth_power_sum();
  return out;
}

MultilinearPoly pairwise_sum(int n) {
  if (n < 2 || n > 64) throw DomainError("pairwise_sum needs 2 <= n <= 64");
  const double c = std::sqrt(2.0 / (static_cast<double>(n) * (n - 1)));
  std::map<std::uint64_t, double> coeffs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) coeffs.emplace((std::uint64_t{1} << i) | (std::uint64_t{1} << j), c);
  }
  return MultilinearPoly(n, std::move(coeffs));
}

InvarianceReport invariance_gap(const MultilinearPoly& q, const McParams& params) {
  check_normalized(q);
  check_samples(params);
  const auto n = static_cast<std::size_t>(q.n());
  InvarianceReport out;
  out.samples = params.samples;
  out.degree = degree_of(q);

  std::vector<double> inf(n, 0.0);
  for (const auto& [set, c] : q.coeffs()) {
    for (std::uint64_t rest = set; rest; rest &= rest - 1) inf[static_cast<std::size_t>(std::countr_zero(rest))] += c * c;
  }
  out.tau = *std::max_element(inf.begin(), inf.end());
  out.reference = out.degree * std::pow(std::pow(10.0, out.degree) * out.tau, 1.0 / (4.0 * out.degree + 1.0));

  std::vector<double> x(n);
  DiscreteLaw rademacher;
  if (q.n() <= kMaxExactInvarianceVars) {
    const std::size_t points = std::size_t{1} << n;
    const double p = 1.0 / static_cast<double>(points);
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(points);
    for (std::size_t m = 0; m < points; ++m) {
      for (std::size_t i = 0; i < n; ++i) x[i] = ((m >> i) & 1u) ? -1.0 : 1.0;
      atoms.emplace_back(q(x), p);
    }
    rademacher = DiscreteLaw::from_atoms(std::move(atoms));
  } else {
    out.rademacher_exact = false;
    Rng rng(params.seed, 1);
    std::vector<double> values(params.samples);
    for (auto& v : values) {
      std::uint64_t bits = rng.bits();
      for (std::size_t i = 0; i < n; ++i) {
        if (i && i % 64 == 0) bits = rng.bits();
        x[i] = (bits >> (i % 64)) & 1u ? -1.0 : 1.0;
      }
      v = q(x);
    }
    rademacher = empirical_law(std::move(values));
  }

  Rng rng(params.seed, 2);
  std::vector<double> values(params.samples);
  for (auto& v : values) {
    for (auto& g : x) g = rng.normal();
    v = q(x);
  }
  out.gap = sup_distance(rademacher, empirical_law(std::move(values)));
  return out;
}

CarberyWrightReport carbery_wright_mc(const MultilinearPoly& q, std::vector<double> eps, const McParams& params,
                                      double center) {
  check_normalized(q);
  check_samples(params);
  if (eps.empty()) throw DomainError("carbery_wright_mc needs at least one eps");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("eps values must lie in (0,1)");
  }
  CarberyWrightReport out;
  out.degree = degree_of(q);
  out.center = center;
  double norm2 = 0.0;
  for (const auto& [set, c] : q.coeffs()) norm2 += c * c;
  norm2 = std::sqrt(norm2);

  std::vector<MeanAccumulator> acc(eps.size());
  std::vector<double> g(static_cast<std::size_t>(q.n()));
  Rng rng(params.seed);
  for (std::uint64_t t = 0; t < params.samples; ++t) {
    for (auto& v : g) v = rng.normal();
    const double dev = std::abs(q(g) - center);
    for (std::size_t k = 0; k < eps.size(); ++k) acc[k].add(dev <= eps[k] ? 1.0 : 0.0);
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    SmallBallRow row{eps[k], acc[k].report(params.seed), 0.0};
    row.ratio = row.probability.estimate / (out.degree * std::pow(eps[k] / norm2, 1.0 / out.degree));
    out.fitted_c = std::max(out.fitted_c, row.ratio);
    out.rows.push_back(row);
  }
  auto sorted = out.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].probability.estimate < sorted[k - 1].probability.estimate) out.monotone = false;
  }
  return out;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  for (int n : config.ns) {
    ExperimentRow row{config.experiment, static_cast<double>(n), 0.0, 0.0};
    if (config.experiment == "be") {
      const BerryEsseenReport r = berry_esseen_gap(WeightedSum::equal(n));
      row.gap = r.gap;
      row.bound = r.epsilon;
    } else if (config.experiment == "hybrid") {
      const HybridReport r = hybrid_smooth_gap(WeightedSum::equal(n), SmoothThreshold(config.t, config.lambda), config.mc);
      row.gap = r.gap;
      row.bound = r.bound;
    } else if (config.experiment == "invariance") {
      const InvarianceReport r = invariance_gap(pairwise_sum(n), config.mc);
      row.gap = r.gap;
      row.bound = r.reference;
    } else {
      throw DomainError("unknown experiment '" + config.experiment + "'");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "experiment,n,gap,bound\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << format_double(r.x) << ',' << format_double(r.gap) << ',' << format_double(r.bound)
        << '\n';
  }
}

}  // namespace bfa
