// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string_view>

#include "selo/simd/kernels.hpp"

namespace selo::simd {

#if !defined(SELO_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !defined(SELO_HAVE_NEON)
const KernelTable* neon_kernels() { return nullptr; }
#endif

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* force = std::getenv("SELO_SIMD");
    if (force != nullptr && std::string_view(force) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    if (const KernelTable* t = neon_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace selo::simd
