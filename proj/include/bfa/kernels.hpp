#pragma once

// Data-parallel inner loops behind the spectral code. Each kernel has a
// portable scalar reference and, where the target supports it, a vectorized
// variant; kernels() hands out the best table the running CPU can execute.
//
// Set BFA_KERNELS=scalar (or avx2) in the environment to force a variant.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace bfa::kernels {

struct KernelTable {
  std::string_view name;

  // In-place unnormalized Walsh-Hadamard butterfly on 2^log_len entries.
  // Every output is produced by the same add/sub sequence in all variants,
  // so results are bit-identical across variants.
  void (*wht)(double* data, unsigned log_len);

  // out[x] = bit x of `bits` ? -1.0 : +1.0, for x < len (len a multiple of 64
  // or the final partial word zero-padded).
  void (*unpack_signs)(const std::uint64_t* bits, double* out, std::size_t len);

  double (*dot)(const double* a, const double* b, std::size_t len);

  // out[i] = a[i] * b[i]; out may alias a or b.
  void (*mul)(double* out, const double* a, const double* b, std::size_t len);

  // data[S] *= level_factor[popcount(S)] over 2^log_len entries.
  void (*scale_by_level)(double* data, unsigned log_len, const double* level_factor);

  // out[k] += sum over S with popcount(S) == k of data[S]^2; out has log_len+1 slots.
  void (*level_weights)(const double* data, unsigned log_len, double* out);
};

const KernelTable& scalar();

// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2();

// Selected once per process: BFA_KERNELS override, else the widest available.
const KernelTable& active();

}  // namespace bfa::kernels
