// SPDX-License-Identifier: Apache-2.0
#include <arm_neon.h>

#include <array>

#include "kernels_common.hpp"
#include "selo/simd/kernels.hpp"

namespace selo::simd {

namespace {

void accumulate(float* sum, std::uint16_t* count, std::size_t n, float score) {
  const float32x4_t s = vdupq_n_f32(score);
  const uint16x8_t one = vdupq_n_u16(1);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    vst1q_f32(sum + i, vaddq_f32(vld1q_f32(sum + i), s));
    vst1q_f32(sum + i + 4, vaddq_f32(vld1q_f32(sum + i + 4), s));
    vst1q_u16(count + i, vaddq_u16(vld1q_u16(count + i), one));
  }
  for (; i < n; ++i) {
    sum[i] += score;
    count[i] = static_cast<std::uint16_t>(count[i] + 1);
  }
}

std::size_t divide(const float* sum, const std::uint16_t* count, float* out, std::size_t n) {
  std::size_t zeros = 0;
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t c = vcvtq_f32_u32(vmovl_u16(vld1_u16(count + i)));
    const uint32x4_t empty = vceqq_f32(c, zero);
    const float32x4_t q = vdivq_f32(vld1q_f32(sum + i), c);
    vst1q_f32(out + i, vbslq_f32(empty, zero, q));
    zeros += static_cast<std::size_t>(vaddvq_u32(vshrq_n_u32(empty, 31)));
  }
  for (; i < n; ++i) {
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
  std::size_t i = 0;
  if (n >= 4) {
    float32x4_t vmin = vld1q_f32(v);
    float32x4_t vmax = vmin;
    for (i = 4; i + 4 <= n; i += 4) {
      const float32x4_t x = vld1q_f32(v + i);
      vmin = vminq_f32(vmin, x);
      vmax = vmaxq_f32(vmax, x);
    }
    a = vminvq_f32(vmin);
    b = vmaxvq_f32(vmax);
  }
  for (; i < n; ++i) {
    a = std::min(a, v[i]);
    b = std::max(b, v[i]);
  }
  *lo = a;
  *hi = b;
}

void normalize(float* v, std::size_t n, float lo, float range) {
  const float32x4_t l = vdupq_n_f32(lo);
  const float32x4_t r = vdupq_n_f32(range);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(v + i, vdivq_f32(vsubq_f32(vld1q_f32(v + i), l), r));
  for (; i < n; ++i) v[i] = (v[i] - lo) / range;
}

MaskedSums masked_sum(const float* v, const std::uint8_t* mask, std::size_t n) {
  // Lanes i % 8 map to acc[0..3]: {0,1}, {2,3}, {4,5}, {6,7}.
  float64x2_t all[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  float64x2_t in[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  std::uint64_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float32x4_t x0 = vld1q_f32(v + i);
    const float32x4_t x1 = vld1q_f32(v + i + 4);
    const float64x2_t d[4] = {vcvt_f64_f32(vget_low_f32(x0)), vcvt_high_f64_f32(x0),
                              vcvt_f64_f32(vget_low_f32(x1)), vcvt_high_f64_f32(x1)};
    const uint8x8_t m8 = vtst_u8(vld1_u8(mask + i), vdup_n_u8(0xff));
    const int8x8_t s8 = vreinterpret_s8_u8(m8);
    const int16x8_t s16 = vmovl_s8(s8);
    const int32x4_t s32l = vmovl_s16(vget_low_s16(s16));
    const int32x4_t s32h = vmovl_s16(vget_high_s16(s16));
    const uint64x2_t sel[4] = {vreinterpretq_u64_s64(vmovl_s32(vget_low_s32(s32l))),
                               vreinterpretq_u64_s64(vmovl_s32(vget_high_s32(s32l))),
                               vreinterpretq_u64_s64(vmovl_s32(vget_low_s32(s32h))),
                               vreinterpretq_u64_s64(vmovl_s32(vget_high_s32(s32h)))};
    for (int q = 0; q < 4; ++q) {
      all[q] = vaddq_f64(all[q], d[q]);
      in[q] = vaddq_f64(in[q], vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(d[q]), sel[q])));
    }
    count += vaddv_u8(vshr_n_u8(m8, 7));
  }
  std::array<double, 8> in_l{};
  std::array<double, 8> all_l{};
  for (int q = 0; q < 4; ++q) {
    vst1q_f64(in_l.data() + 2 * q, in[q]);
    vst1q_f64(all_l.data() + 2 * q, all[q]);
  }
  for (; i < n; ++i) {
    const double x = v[i];
    all_l[i % 8] += x;
    in_l[i % 8] += mask[i] ? x : 0.0;
    count += mask[i] ? 1 : 0;
  }
  return {detail::reduce8(in_l), detail::reduce8(all_l), count};
}

void row_max(const float* in, float* out, std::size_t n, int r) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float* w = in + i - r;
    float32x4_t m = vld1q_f32(w);
    for (int d = 1; d <= 2 * r; ++d) m = vmaxq_f32(m, vld1q_f32(w + d));
    vst1q_f32(out + i, m);
  }
  for (; i < n; ++i) {
    const float* w = in + i - r;
    float m = w[0];
    for (int d = 1; d <= 2 * r; ++d) m = std::max(m, w[d]);
    out[i] = m;
  }
}

void column_max(const float* const* rows, std::size_t count, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t m = vld1q_f32(rows[0] + i);
    for (std::size_t k = 1; k < count; ++k) m = vmaxq_f32(m, vld1q_f32(rows[k] + i));
    vst1q_f32(out + i, m);
  }
  for (; i < n; ++i) {
    float m = rows[0][i];
    for (std::size_t k = 1; k < count; ++k) m = std::max(m, rows[k][i]);
    out[i] = m;
  }
}

void median_row(const float* const* rows, int k, const MedianNetwork& net, float* out, std::size_t n) {
  constexpr int kMaxInputs = 81;
  if (net.inputs > kMaxInputs) {
    detail::median_row_scalar(rows, k, net, out, 0, n);
    return;
  }
  float32x4_t reg[kMaxInputs];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::size_t q = 0;
    for (int dy = 0; dy < k; ++dy) {
      const float* base = rows[dy] + i;
      for (int dx = 0; dx < k; ++dx) reg[q++] = vld1q_f32(base + dx);
    }
    for (const auto& op : net.ops) {
      const float32x4_t a = reg[op.lo];
      const float32x4_t b = reg[op.hi];
      if (op.kind != MedianNetwork::Kind::MaxOnly) reg[op.lo] = vminq_f32(a, b);
      if (op.kind != MedianNetwork::Kind::MinOnly) reg[op.hi] = vmaxq_f32(a, b);
    }
    vst1q_f32(out + i, reg[net.result]);
  }
  detail::median_row_scalar(rows, k, net, out, i, n);
}

}  // namespace

// NEON is mandatory on AArch64.
const KernelTable* neon_kernels() {
  static const KernelTable table{"neon", accumulate, divide, minmax, normalize,
                                 masked_sum, row_max, column_max, median_row};
  return &table;
}

}  // namespace selo::simd
