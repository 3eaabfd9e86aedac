#pragma once

#include <cstdint>
#include <random>

namespace bfa {

// Hash of (seed, stream) used to derive independent substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Seeded generator for every randomized routine. Identical (seed, stream)
// pairs give identical sequences within one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t bits() { return engine_(); }
  double uniform();  // [0, 1)
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bfa
