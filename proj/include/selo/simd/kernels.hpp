// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace selo::simd {

/// Compare-exchange program that leaves the median of `inputs` values in
/// register `result`. Registers 0..inputs-1 hold the inputs on entry.
struct MedianNetwork {
  enum class Kind : std::uint8_t { Both, MinOnly, MaxOnly };
  struct Op {
    std::uint16_t lo;  // receives min
    std::uint16_t hi;  // receives max
    Kind kind;
  };
  int inputs = 0;
  int result = 0;
  std::vector<Op> ops;
};

/// Pruned Batcher odd-even merge network selecting the median of n (odd) values.
const MedianNetwork& median_network(int n);

struct MaskedSums {
  double inside = 0.0;
  double total = 0.0;
  std::uint64_t inside_count = 0;
};

/// One implementation of every data-parallel inner loop. All variants of an
/// entry must produce bit-identical results; the equivalence tests hold them to it.
struct KernelTable {
  std::string_view name;

  /// sum[i] += score; count[i] += 1 for i in [0, n).
  void (*accumulate)(float* sum, std::uint16_t* count, std::size_t n, float score);

  /// out[i] = sum[i] / count[i]. Returns the number of zero counts (out is 0 there).
  std::size_t (*divide)(const float* sum, const std::uint16_t* count, float* out, std::size_t n);

  /// Min and max of a nonempty span.
  void (*minmax)(const float* v, std::size_t n, float* lo, float* hi);

  /// v[i] = (v[i] - lo) / range.
  void (*normalize)(float* v, std::size_t n, float lo, float range);

  /// Sums of v over mask != 0 and over everything, in double precision with a
  /// fixed 8-lane blocked order.
  MaskedSums (*masked_sum)(const float* v, const std::uint8_t* mask, std::size_t n);

  /// out[i] = max(in[i - r .. i + r]) where `in` points at element 0 of a row
  /// padded by r on both sides.
  void (*row_max)(const float* in, float* out, std::size_t n, int r);

  /// out[i] = max over rows[k][i], k in [0, count).
  void (*column_max)(const float* const* rows, std::size_t count, float* out, std::size_t n);

  /// Median of a k x k window for n consecutive outputs. `rows[k]` points at the
  /// first padded column of the k-th window row.
  void (*median_row)(const float* const* rows, int k, const MedianNetwork& net, float* out, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best table for this CPU. SELO_SIMD=scalar forces the reference kernels.
const KernelTable& active_kernels();

}  // namespace selo::simd
