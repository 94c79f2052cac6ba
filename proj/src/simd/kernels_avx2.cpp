// SPDX-License-Identifier: Apache-2.0
// Built with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <array>

#include "kernels_common.hpp"
#include "selo/simd/kernels.hpp"

namespace selo::simd {

namespace {

void accumulate(float* sum, std::uint16_t* count, std::size_t n, float score) {
  const __m256 s = _mm256_set1_ps(score);
  const __m256i one = _mm256_set1_epi16(1);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    _mm256_storeu_ps(sum + i, _mm256_add_ps(_mm256_loadu_ps(sum + i), s));
    _mm256_storeu_ps(sum + i + 8, _mm256_add_ps(_mm256_loadu_ps(sum + i + 8), s));
    auto* c = reinterpret_cast<__m256i*>(count + i);
    _mm256_storeu_si256(c, _mm256_add_epi16(_mm256_loadu_si256(c), one));
  }
  for (; i < n; ++i) {
    sum[i] += score;
    count[i] = static_cast<std::uint16_t>(count[i] + 1);
  }
}

std::size_t divide(const float* sum, const std::uint16_t* count, float* out, std::size_t n) {
  std::size_t zeros = 0;
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i c16 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(count + i));
    const __m256 c = _mm256_cvtepi32_ps(_mm256_cvtepu16_epi32(c16));
    const __m256 empty = _mm256_cmp_ps(c, zero, _CMP_EQ_OQ);
    const __m256 q = _mm256_div_ps(_mm256_loadu_ps(sum + i), c);
    _mm256_storeu_ps(out + i, _mm256_blendv_ps(q, zero, empty));
    zeros += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(empty))));
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

float hmin(__m256 v) {
  __m128 m = _mm_min_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
  m = _mm_min_ps(m, _mm_movehl_ps(m, m));
  m = _mm_min_ss(m, _mm_shuffle_ps(m, m, 1));
  return _mm_cvtss_f32(m);
}

float hmax(__m256 v) {
  __m128 m = _mm_max_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
  m = _mm_max_ps(m, _mm_movehl_ps(m, m));
  m = _mm_max_ss(m, _mm_shuffle_ps(m, m, 1));
  return _mm_cvtss_f32(m);
}

void minmax(const float* v, std::size_t n, float* lo, float* hi) {
  float a = v[0];
  float b = v[0];
  std::size_t i = 0;
  if (n >= 8) {
    __m256 vmin = _mm256_loadu_ps(v);
    __m256 vmax = vmin;
    for (i = 8; i + 8 <= n; i += 8) {
      const __m256 x = _mm256_loadu_ps(v + i);
      vmin = _mm256_min_ps(vmin, x);
      vmax = _mm256_max_ps(vmax, x);
    }
    a = hmin(vmin);
    b = hmax(vmax);
  }
  for (; i < n; ++i) {
    a = std::min(a, v[i]);
    b = std::max(b, v[i]);
  }
  *lo = a;
  *hi = b;
}

void normalize(float* v, std::size_t n, float lo, float range) {
  const __m256 l = _mm256_set1_ps(lo);
  const __m256 r = _mm256_set1_ps(range);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(v + i, _mm256_div_ps(_mm256_sub_ps(_mm256_loadu_ps(v + i), l), r));
  }
  for (; i < n; ++i) v[i] = (v[i] - lo) / range;
}

MaskedSums masked_sum(const float* v, const std::uint8_t* mask, std::size_t n) {
  __m256d all_lo = _mm256_setzero_pd();
  __m256d all_hi = _mm256_setzero_pd();
  __m256d in_lo = _mm256_setzero_pd();
  __m256d in_hi = _mm256_setzero_pd();
  std::uint64_t count = 0;
  const __m128i zero8 = _mm_setzero_si128();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 x = _mm256_loadu_ps(v + i);
    const __m256d xl = _mm256_cvtps_pd(_mm256_castps256_ps128(x));
    const __m256d xh = _mm256_cvtps_pd(_mm256_extractf128_ps(x, 1));
    const __m128i m8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask + i));
    const __m128i set8 = _mm_xor_si128(_mm_cmpeq_epi8(m8, zero8), _mm_set1_epi8(-1));
    const __m256i set64l = _mm256_cvtepi8_epi64(set8);
    const __m256i set64h = _mm256_cvtepi8_epi64(_mm_srli_si128(set8, 4));
    all_lo = _mm256_add_pd(all_lo, xl);
    all_hi = _mm256_add_pd(all_hi, xh);
    in_lo = _mm256_add_pd(in_lo, _mm256_and_pd(xl, _mm256_castsi256_pd(set64l)));
    in_hi = _mm256_add_pd(in_hi, _mm256_and_pd(xh, _mm256_castsi256_pd(set64h)));
    count += static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(_mm_movemask_epi8(set8)) & 0xffu));
  }
  std::array<double, 8> in{};
  std::array<double, 8> all{};
  _mm256_storeu_pd(in.data(), in_lo);
  _mm256_storeu_pd(in.data() + 4, in_hi);
  _mm256_storeu_pd(all.data(), all_lo);
  _mm256_storeu_pd(all.data() + 4, all_hi);
  for (; i < n; ++i) {
    const double x = v[i];
    all[i % 8] += x;
    in[i % 8] += mask[i] ? x : 0.0;
    count += mask[i] ? 1 : 0;
  }
  return {detail::reduce8(in), detail::reduce8(all), count};
}

void row_max(const float* in, float* out, std::size_t n, int r) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float* w = in + i - r;
    __m256 m = _mm256_loadu_ps(w);
    for (int d = 1; d <= 2 * r; ++d) m = _mm256_max_ps(m, _mm256_loadu_ps(w + d));
    _mm256_storeu_ps(out + i, m);
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
  for (; i + 8 <= n; i += 8) {
    __m256 m = _mm256_loadu_ps(rows[0] + i);
    for (std::size_t k = 1; k < count; ++k) m = _mm256_max_ps(m, _mm256_loadu_ps(rows[k] + i));
    _mm256_storeu_ps(out + i, m);
  }
  for (; i < n; ++i) {
    float m = rows[0][i];
    for (std::size_t k = 1; k < count; ++k) m = std::max(m, rows[k][i]);
    out[i] = m;
  }
}

// Eight output pixels per pass: one vector register per window element.
void median_row(const float* const* rows, int k, const MedianNetwork& net, float* out, std::size_t n) {
  constexpr int kMaxInputs = 81;
  if (net.inputs > kMaxInputs) {
    detail::median_row_scalar(rows, k, net, out, 0, n);
    return;
  }
  __m256 reg[kMaxInputs];
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::size_t q = 0;
    for (int dy = 0; dy < k; ++dy) {
      const float* base = rows[dy] + i;
      for (int dx = 0; dx < k; ++dx) reg[q++] = _mm256_loadu_ps(base + dx);
    }
    for (const auto& op : net.ops) {
      const __m256 a = reg[op.lo];
      const __m256 b = reg[op.hi];
      if (op.kind != MedianNetwork::Kind::MaxOnly) reg[op.lo] = _mm256_min_ps(a, b);
      if (op.kind != MedianNetwork::Kind::MinOnly) reg[op.hi] = _mm256_max_ps(a, b);
    }
    _mm256_storeu_ps(out + i, reg[static_cast<std::size_t>(net.result)]);
  }
  detail::median_row_scalar(rows, k, net, out, i, n);
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", accumulate, divide, minmax, normalize,
                                 masked_sum, row_max, column_max, median_row};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace selo::simd
