// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>

#include "kernels_common.hpp"
#include "selo/simd/kernels.hpp"

namespace selo::simd {

namespace {

void accumulate(float* sum, std::uint16_t* count, std::size_t n, float score) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += score;
    count[i] = static_cast<std::uint16_t>(count[i] + 1);
  }
}

std::size_t divide(const float* sum, const std::uint16_t* count, float* out, std::size_t n) {
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) {
      out[i] = 0.0f;
      ++zeros;
    } else {
      out[i] = sum[i] / static_cast<float>(count[i]);
    }
  }
  return zeros;
}

void minmax(const float* v, std::size_t n, float* lo, float* hi) {
  float a = v[0];
  float b = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    a = std::min(a, v[i]);
    b = std::max(b, v[i]);
  }
  *lo = a;
  *hi = b;
}

void normalize(float* v, std::size_t n, float lo, float range) {
  for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] - lo) / range;
}

MaskedSums masked_sum(const float* v, const std::uint8_t* mask, std::size_t n) {
  std::array<double, 8> in{};
  std::array<double, 8> all{};
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    all[i % 8] += x;
    in[i % 8] += mask[i] ? x : 0.0;
    count += mask[i] ? 1 : 0;
  }
  return {detail::reduce8(in), detail::reduce8(all), count};
}

void row_max(const float* in, float* out, std::size_t n, int r) {
  for (std::size_t i = 0; i < n; ++i) {
    const float* w = in + i - r;
    float m = w[0];
    for (int d = 1; d <= 2 * r; ++d) m = std::max(m, w[d]);
    out[i] = m;
  }
}

void column_max(const float* const* rows, std::size_t count, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    float m = rows[0][i];
    for (std::size_t k = 1; k < count; ++k) m = std::max(m, rows[k][i]);
    out[i] = m;
  }
}

void median_row(const float* const* rows, int k, const MedianNetwork& net, float* out, std::size_t n) {
  detail::median_row_scalar(rows, k, net, out, 0, n);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", accumulate, divide, minmax, normalize,
                                 masked_sum, row_max, column_max, median_row};
  return table;
}

}  // namespace selo::simd
