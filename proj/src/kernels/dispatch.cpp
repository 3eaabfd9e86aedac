#include "bfa/kernels.hpp"

#include <cstdlib>
#include <string_view>

#if defined(BFA_HAVE_AVX2)
#include "avx2.hpp"
#endif

namespace bfa::kernels {
namespace {

#if defined(BFA_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    avx2_impl::wht,
    avx2_impl::unpack_signs,
    avx2_impl::dot,
    avx2_impl::mul,
    avx2_impl::scale_by_level,
    avx2_impl::level_weights,
};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() {
  const char* forced = std::getenv("BFA_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar();
  if (const KernelTable* wide = avx2()) return *wide;
  return scalar();
}

}  // namespace

const KernelTable* avx2() {
#if defined(BFA_HAVE_AVX2)
  static const bool available = cpu_has_avx2();
  return available ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace bfa::kernels
