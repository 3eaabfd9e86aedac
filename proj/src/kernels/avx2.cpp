#include "avx2.hpp"

#include <immintrin.h>

namespace bfa::kernels::avx2_impl {
namespace {

// Tables shorter than one vector go through plain loops.
void wht_small(double* data, unsigned log_len) {
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

inline __m256d butterfly_in_register(__m256d v) {
  // h = 1: [x0+x1, x0-x1, x2+x3, x2-x3]
  __m256d sw = _mm256_permute_pd(v, 0b0101);
  v = _mm256_blend_pd(_mm256_add_pd(v, sw), _mm256_sub_pd(sw, v), 0b1010);
  // h = 2: [y0+y2, y1+y3, y0-y2, y1-y3]
  sw = _mm256_permute2f128_pd(v, v, 0x01);
  return _mm256_blend_pd(_mm256_add_pd(v, sw), _mm256_sub_pd(sw, v), 0b1100);
}

inline int popcount(std::size_t v) { return __builtin_popcountll(v); }

}  // namespace

void wht(double* data, unsigned log_len) {
  if (log_len < 2) {
    wht_small(data, log_len);
    return;
  }
  const std::size_t len = std::size_t{1} << log_len;
  for (std::size_t i = 0; i < len; i += 4) {
    _mm256_storeu_pd(data + i, butterfly_in_register(_mm256_loadu_pd(data + i)));
  }
  for (std::size_t h = 4; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 4) {
        const __m256d a = _mm256_loadu_pd(data + j);
        const __m256d b = _mm256_loadu_pd(data + j + h);
        _mm256_storeu_pd(data + j, _mm256_add_pd(a, b));
        _mm256_storeu_pd(data + j + h, _mm256_sub_pd(a, b));
      }
    }
  }
}

void unpack_signs(const std::uint64_t* bits, double* out, std::size_t len) {
  const __m256i lane_bits = _mm256_set_epi64x(8, 4, 2, 1);
  const __m256d plus = _mm256_set1_pd(1.0);
  const __m256d minus = _mm256_set1_pd(-1.0);
  std::size_t x = 0;
  for (; x + 4 <= len; x += 4) {
    const std::uint64_t nibble = (bits[x >> 6] >> (x & 63)) & 0xF;
    const __m256i v = _mm256_and_si256(_mm256_set1_epi64x(static_cast<long long>(nibble)), lane_bits);
    const __m256d set = _mm256_castsi256_pd(_mm256_cmpeq_epi64(v, lane_bits));
    _mm256_storeu_pd(out + x, _mm256_blendv_pd(plus, minus, set));
  }
  for (; x < len; ++x) {
    out[x] = ((bits[x >> 6] >> (x & 63)) & 1u) ? -1.0 : 1.0;
  }
}

double dot(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += a[i] * b[i];
  return total;
}

void mul(double* out, const double* a, const double* b, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < len; ++i) out[i] = a[i] * b[i];
}

void scale_by_level(double* data, unsigned log_len, const double* level_factor) {
  const std::size_t len = std::size_t{1} << log_len;
  if (log_len < 2) {
    for (std::size_t s = 0; s < len; ++s) data[s] *= level_factor[popcount(s)];
    return;
  }
  // Within an aligned block of four, popcounts are base + {0, 1, 1, 2}.
  for (std::size_t s = 0; s < len; s += 4) {
    const int base = popcount(s);
    const __m256d f = _mm256_set_pd(level_factor[base + 2], level_factor[base + 1],
                                    level_factor[base + 1], level_factor[base]);
    _mm256_storeu_pd(data + s, _mm256_mul_pd(_mm256_loadu_pd(data + s), f));
  }
}

void level_weights(const double* data, unsigned log_len, double* out) {
  const std::size_t len = std::size_t{1} << log_len;
  if (log_len < 2) {
    for (std::size_t s = 0; s < len; ++s) out[popcount(s)] += data[s] * data[s];
    return;
  }
  // One vector accumulator per block popcount; lanes fold back to levels at the end.
  __m256d acc[64];
  const unsigned blocks_log = log_len - 2;
  for (unsigned p = 0; p <= blocks_log; ++p) acc[p] = _mm256_setzero_pd();
  for (std::size_t s = 0; s < len; s += 4) {
    const __m256d v = _mm256_loadu_pd(data + s);
    const int base = popcount(s);
    acc[base] = _mm256_fmadd_pd(v, v, acc[base]);
  }
  alignas(32) double lanes[4];
  for (unsigned p = 0; p <= blocks_log; ++p) {
    _mm256_store_pd(lanes, acc[p]);
    out[p] += lanes[0];
    out[p + 1] += lanes[1] + lanes[2];
    out[p + 2] += lanes[3];
  }
}

}  // namespace bfa::kernels::avx2_impl
