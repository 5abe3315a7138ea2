#include <cstdlib>
#include <string_view>

#include "floorscan/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace floorscan::simd {

const KernelSet* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? detail::avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet& chosen = [] () -> const KernelSet& {
    const char* env = std::getenv("FLOORSCAN_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelSet* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace floorscan::simd
