#pragma once

// Monte-Carlo plumbing shared by the estimators: the report type, a running
// mean/variance accumulator, pointwise function oracles and input samplers.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "bfa/core.hpp"
#include "bfa/family.hpp"
#include "bfa/rng.hpp"

namespace bfa {

struct McParams {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

struct McReport {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const McReport& r);  // {estimate, stderr, samples, seed}

// |exact - estimate| <= sigmas * stderr, with a 1e-12 floor for zero-variance runs.
bool agrees(double exact, const McReport& r, double sigmas = 4.0);

void check_samples(const McParams& p);

// Welford accumulator.
class MeanAccumulator {
 public:
  void add(double v) {
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }
  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  McReport report(std::uint64_t seed) const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Pointwise access to a +/-1 function on n bits; inputs are packed in 64-bit
// words (bit i = variable i+1), unused high bits zero.
class Oracle {
 public:
  using Fn = std::function<int(std::span<const std::uint64_t>)>;

  Oracle(int n, Fn fn);
  static Oracle of(const TruthTable& table);
  static Oracle of(const FamilySpec& spec);

  int n() const { return n_; }
  std::size_t words() const { return (static_cast<std::size_t>(n_) + 63) / 64; }
  int operator()(std::span<const std::uint64_t> x) const { return fn_(x); }

 private:
  int n_;
  Fn fn_;
};

void sample_uniform(Rng& rng, std::span<std::uint64_t> out, int n);

// y_i = x_i with probability 1/2 + rho/2, independently per coordinate.
void sample_correlated(Rng& rng, std::span<const std::uint64_t> x, std::span<std::uint64_t> y, int n, double rho);

}  // namespace bfa
