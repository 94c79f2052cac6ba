// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "selo/simd/kernels.hpp"

namespace selo::simd::detail {

// Fixed pairwise order; every kernel variant reduces its lanes through this.
inline double reduce8(const std::array<double, 8>& lanes) {
  return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
}

inline void median_row_scalar(const float* const* rows, int k, const MedianNetwork& net, float* out,
                              std::size_t begin, std::size_t end) {
  std::vector<float> reg(static_cast<std::size_t>(net.inputs));
  for (std::size_t i = begin; i < end; ++i) {
    std::size_t q = 0;
    for (int dy = 0; dy < k; ++dy) {
      for (int dx = 0; dx < k; ++dx) reg[q++] = rows[dy][i + static_cast<std::size_t>(dx)];
    }
    for (const auto& op : net.ops) {
      const float a = reg[op.lo];
      const float b = reg[op.hi];
      if (op.kind != MedianNetwork::Kind::MaxOnly) reg[op.lo] = std::min(a, b);
      if (op.kind != MedianNetwork::Kind::MinOnly) reg[op.hi] = std::max(a, b);
    }
    out[i] = reg[static_cast<std::size_t>(net.result)];
  }
}

}  // namespace selo::simd::detail
