#pragma once

#include "floorscan/simd/kernels.hpp"

namespace floorscan::simd::detail {

// Defined in kernels_avx2.cpp when the compiler can target AVX2.
const KernelSet* avx2_kernel_table();

}  // namespace floorscan::simd::detail
