#pragma once

// Entry points of the AVX2 translation unit. Kept free of standard-library
// headers so nothing inline gets compiled with -mavx2 and leaks into the
// baseline build through ODR merging.

#include <cstddef>
#include <cstdint>

namespace bfa::kernels::avx2_impl {

void wht(double* data, unsigned log_len);
void unpack_signs(const std::uint64_t* bits, double* out, std::size_t len);
double dot(const double* a, const double* b, std::size_t len);
void mul(double* out, const double* a, const double* b, std::size_t len);
void scale_by_level(double* data, unsigned log_len, const double* level_factor);
void level_weights(const double* data, unsigned log_len, double* out);

}  // namespace bfa::kernels::avx2_impl
