// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "selo/metrics.hpp"
#include "selo/simd/kernels.hpp"

namespace selo {

double compute_rsu(const ProbabilityMap& map, const std::vector<Mask>& masks, const MetricParams& params) {
  if (masks.empty()) throw Error(Errc::EmptyGt, "no ground-truth masks");
  Mask united(map.height(), map.width(), 0);
  for (const Mask& m : masks) {
    if (!m.same_shape(map)) throw Error(Errc::DimMismatch, "mask and map dimensions differ");
    for (std::size_t i = 0; i < m.size(); ++i) united.data()[i] |= m.data()[i] ? 1 : 0;
  }
  const auto sums = simd::active_kernels().masked_sum(map.data(), united.data(), map.size());
  if (sums.inside_count == 0) throw Error(Errc::EmptyGt, "ground-truth union is empty");
  if (sums.inside_count == map.size()) {
    spdlog::warn("ground truth covers the whole image; R_su is 0");
    return 0.0;
  }
  const double gt_area = static_cast<double>(sums.inside_count);
  const double outside = std::max(0.0, sums.total - sums.inside);
  const double t_l = sums.inside > 0.0 ? sums.inside / (outside + params.eps) : 0.0;
  const double t_r = (static_cast<double>(map.size()) - gt_area) / gt_area;
  return 1.0 - std::exp(-params.alpha * t_l * t_r);
}

}  // namespace selo
