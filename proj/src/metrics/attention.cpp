// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "selo/metrics.hpp"
#include "selo/simd/kernels.hpp"

namespace selo {

namespace {

/// Window maximum of every pixel, window clipped to the image.
ProbabilityMap window_max(const ProbabilityMap& map, int window) {
  const int h = map.height();
  const int w = map.width();
  const int r = window / 2;
  const auto& k = simd::active_kernels();
  ProbabilityMap horizontal(h, w);
  std::vector<float> padded(static_cast<std::size_t>(w + 2 * r), -std::numeric_limits<float>::infinity());
  for (int y = 0; y < h; ++y) {
    std::copy(map.row(y).begin(), map.row(y).end(), padded.begin() + r);
    k.row_max(padded.data() + r, horizontal.row(y).data(), static_cast<std::size_t>(w), r);
  }
  ProbabilityMap out(h, w);
  std::vector<const float*> rows;
  for (int y = 0; y < h; ++y) {
    rows.clear();
    for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) rows.push_back(horizontal.row(yy).data());
    k.column_max(rows.data(), rows.size(), out.row(y).data(), static_cast<std::size_t>(w));
  }
  return out;
}

}  // namespace

std::vector<AttentionPoint> find_local_maxima(const ProbabilityMap& map, int window) {
  if (window < 1 || window % 2 == 0) throw Error(Errc::InvalidArgument, "nms window must be odd and >= 1");
  const int h = map.height();
  const int w = map.width();
  const ProbabilityMap peak = window_max(map, window);

  std::vector<AttentionPoint> out;
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t start = static_cast<std::size_t>(y) * w + x;
      if (seen[start]) continue;
      const float value = map(y, x);
      // Flood the 8-connected equal-valued component.
      bool is_max = true;
      double sx = 0.0;
      double sy = 0.0;
      std::size_t n = 0;
      stack.assign(1, static_cast<int>(start));
      seen[start] = 1;
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int cy = idx / w;
        const int cx = idx % w;
        if (peak(cy, cx) != value) is_max = false;
        sx += cx + 0.5;
        sy += cy + 0.5;
        ++n;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = cy + dy;
            const int nx = cx + dx;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (seen[ni] || map(ny, nx) != value) continue;
            seen[ni] = 1;
            stack.push_back(static_cast<int>(ni));
          }
        }
      }
      if (is_max) out.push_back({sx / static_cast<double>(n), sy / static_cast<double>(n), value});
    }
  }
  return out;
}

std::vector<AttentionPoint> filter_attention(const std::vector<AttentionPoint>& maxima,
                                             const GtRegionContext& context, const MetricParams& params) {
  std::vector<AttentionPoint> out;
  for (const auto& p : maxima) {
    if (!(p.prob > params.rho)) continue;
    if (std::hypot(p.x - context.center.x, p.y - context.center.y) > context.candidate_radius) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<AttentionPoint> detect_attention(const ProbabilityMap& map, const GtRegionContext& context,
                                             const MetricParams& params) {
  return filter_attention(find_local_maxima(map, params.nms_window), context, params);
}

}  // namespace selo
