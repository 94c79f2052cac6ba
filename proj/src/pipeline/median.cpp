// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdint>

#include "selo/pipeline.hpp"
#include "selo/simd/kernels.hpp"

namespace selo {

namespace {

// Window sizes up to this use the compare-exchange network; larger ones the
// rank histogram, whose cost grows with k rather than k^2.
constexpr int kNetworkMaxKernel = 7;

int reflect(int i, int n) {
  if (i < 0) return -1 - i;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

void check_kernel(const ProbabilityMap& map, int kernel) {
  if (kernel < 1) throw Error(Errc::InvalidArgument, "median kernel must be >= 1");
  if (kernel % 2 == 0) throw Error(Errc::EvenKernel, "median kernel must be odd, got " + std::to_string(kernel));
  if (kernel > std::min(map.height(), map.width())) {
    throw Error(Errc::InvalidArgument, "median kernel larger than the map");
  }
}

template <typename T>
Raster<T> pad_reflect(const Raster<T>& in, int r) {
  Raster<T> out(in.height() + 2 * r, in.width() + 2 * r);
  for (int y = 0; y < out.height(); ++y) {
    const auto src = in.row(reflect(y - r, in.height()));
    auto dst = out.row(y);
    for (int x = 0; x < out.width(); ++x) dst[x] = src[reflect(x - r, in.width())];
  }
  return out;
}

}  // namespace

namespace detail {

ProbabilityMap median_filter_network(const ProbabilityMap& map, int kernel) {
  check_kernel(map, kernel);
  if (kernel == 1) return map;
  const int r = kernel / 2;
  const auto padded = pad_reflect(map, r);
  const auto& net = simd::median_network(kernel * kernel);
  const auto& k = simd::active_kernels();

  ProbabilityMap out(map.height(), map.width());
  std::vector<const float*> rows(static_cast<std::size_t>(kernel));
  for (int y = 0; y < map.height(); ++y) {
    for (int dy = 0; dy < kernel; ++dy) rows[dy] = padded.row(y + dy).data();
    k.median_row(rows.data(), kernel, net, out.row(y).data(), static_cast<std::size_t>(map.width()));
  }
  return out;
}

// Sliding rank histogram (Huang) walked in serpentine order so the histogram
// and the median cursor carry over between rows.
ProbabilityMap median_filter_histogram(const ProbabilityMap& map, int kernel) {
  check_kernel(map, kernel);
  if (kernel == 1) return map;
  const int r = kernel / 2;
  const int height = map.height();
  const int width = map.width();

  std::vector<float> levels(map.values().begin(), map.values().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  Raster<std::uint32_t> ranks(height, width);
  for (std::size_t i = 0; i < map.size(); ++i) {
    ranks.values()[i] = static_cast<std::uint32_t>(
        std::lower_bound(levels.begin(), levels.end(), map.values()[i]) - levels.begin());
  }
  const auto padded = pad_reflect(ranks, r);

  std::vector<std::uint32_t> hist(levels.size(), 0);
  const std::int64_t target = static_cast<std::int64_t>(kernel) * kernel / 2;
  std::uint32_t m = 0;
  std::int64_t below = 0;

  auto update = [&](std::uint32_t q, int delta) {
    hist[q] += static_cast<std::uint32_t>(delta);
    if (q < m) below += delta;
  };
  auto add_row = [&](int py, int px, int delta) {
    const auto row = padded.row(py);
    for (int c = px; c < px + kernel; ++c) update(row[c], delta);
  };
  auto add_col = [&](int py, int px, int delta) {
    for (int y = py; y < py + kernel; ++y) update(padded(y, px), delta);
  };
  auto settle = [&] {
    while (below > target) {
      --m;
      below -= hist[m];
    }
    while (below + hist[m] <= target) {
      below += hist[m];
      ++m;
    }
  };

  ProbabilityMap out(height, width);
  int x = 0;
  int dir = 1;
  for (int y = 0; y < height; ++y) {
    if (y == 0) {
      for (int py = 0; py < kernel; ++py) add_row(py, 0, +1);
    } else {
      add_row(y - 1, x, -1);
      add_row(y + kernel - 1, x, +1);
    }
    settle();
    out(y, x) = levels[m];
    if (dir > 0) {
      while (x + 1 < width) {
        ++x;
        add_col(y, x - 1, -1);
        add_col(y, x + kernel - 1, +1);
        settle();
        out(y, x) = levels[m];
      }
    } else {
      while (x > 0) {
        --x;
        add_col(y, x + kernel, -1);
        add_col(y, x, +1);
        settle();
        out(y, x) = levels[m];
      }
    }
    dir = -dir;
  }
  return out;
}

}  // namespace detail

ProbabilityMap median_filter(const ProbabilityMap& map, int kernel) {
  check_kernel(map, kernel);
  if (kernel == 1) return map;
  if (kernel <= kNetworkMaxKernel) return detail::median_filter_network(map, kernel);
  return detail::median_filter_histogram(map, kernel);
}

}  // namespace selo
