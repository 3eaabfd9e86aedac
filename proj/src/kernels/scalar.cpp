#include "bfa/kernels.hpp"

#include <bit>

namespace bfa::kernels {
namespace {

void wht_scalar(double* data, unsigned log_len) {
  const std::size_t len = std::size_t{1} << log_len;
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = data[j];
        const double b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

void unpack_signs_scalar(const std::uint64_t* bits, double* out, std::size_t len) {
  for (std::size_t x = 0; x < len; ++x) {
    out[x] = ((bits[x >> 6] >> (x & 63)) & 1u) ? -1.0 : 1.0;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

void mul_scalar(double* out, const double* a, const double* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = a[i] * b[i];
}

void scale_by_level_scalar(double* data, unsigned log_len, const double* level_factor) {
  const std::size_t len = std::size_t{1} << log_len;
  for (std::size_t s = 0; s < len; ++s) {
    data[s] *= level_factor[std::popcount(s)];
  }
}

void level_weights_scalar(const double* data, unsigned log_len, double* out) {
  const std::size_t len = std::size_t{1} << log_len;
  for (std::size_t s = 0; s < len; ++s) {
    out[std::popcount(s)] += data[s] * data[s];
  }
}

constexpr KernelTable kScalar{
    "scalar",          wht_scalar,           unpack_signs_scalar, dot_scalar,
    mul_scalar,        scale_by_level_scalar, level_weights_scalar,
};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace bfa::kernels
