#include "bfa/mc.hpp"

#include <cmath>

#include "bfa/error.hpp"

namespace bfa {

void to_json(nlohmann::json& j, const McReport& r) {
  j = nlohmann::json{{"estimate", r.estimate}, {"stderr", r.std_error}, {"samples", r.samples}, {"seed", r.seed}};
}

bool agrees(double exact, const McReport& r, double sigmas) {
  return std::abs(exact - r.estimate) <= sigmas * r.std_error + 1e-12;
}

void check_samples(const McParams& p) {
  if (p.samples == 0) throw DomainError("sample count must be positive");
}

McReport MeanAccumulator::report(std::uint64_t seed) const {
  return McReport{mean_, std::sqrt(variance() / static_cast<double>(count_ ? count_ : 1)), count_, seed};
}

Oracle::Oracle(int n, Fn fn) : n_(n), fn_(std::move(fn)) {
  if (n < 1) throw DomainError("oracle needs n >= 1");
}

Oracle Oracle::of(const TruthTable& table) {
  auto shared = std::make_shared<const TruthTable>(table);
  return Oracle(table.n(), [shared](std::span<const std::uint64_t> x) { return (*shared)(static_cast<Mask>(x[0])); });
}

Oracle Oracle::of(const FamilySpec& spec) {
  if (spec.kind == FamilyKind::Random || spec.n <= 16) return of(make_family(spec));
  return Oracle(spec.n, [spec](std::span<const std::uint64_t> x) { return evaluate(spec, x); });
}

void sample_uniform(Rng& rng, std::span<std::uint64_t> out, int n) {
  for (auto& w : out) w = rng.bits();
  const int tail = n & 63;
  if (tail) out[out.size() - 1] &= (std::uint64_t{1} << tail) - 1;
}

void sample_correlated(Rng& rng, std::span<const std::uint64_t> x, std::span<std::uint64_t> y, int n, double rho) {
  const double flip = 0.5 - 0.5 * rho;
  for (std::size_t w = 0; w < y.size(); ++w) y[w] = x[w];
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(flip)) y[static_cast<std::size_t>(i) >> 6] ^= std::uint64_t{1} << (i & 63);
  }
}

}  // namespace bfa
