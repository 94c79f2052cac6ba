// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "selo/pipeline.hpp"

namespace selo {

void PipelineConfig::validate() const {
  if (scales.empty()) throw Error(Errc::InvalidArgument, "at least one scale is required");
  for (int s : scales) {
    if (s <= 0) throw Error(Errc::InvalidArgument, "scales must be positive");
  }
  if (offsets.empty()) throw Error(Errc::InvalidArgument, "at least one offset is required");
  for (double f : offsets) {
    if (!(f >= 0.0 && f < 1.0)) throw Error(Errc::InvalidArgument, "offsets must lie in [0, 1)");
  }
  if (std::find(offsets.begin(), offsets.end(), 0.0) == offsets.end()) {
    throw Error(Errc::InvalidArgument, "offsets must contain 0 so every pixel is covered");
  }
  if (median_kernel) {
    if (*median_kernel < 1) throw Error(Errc::InvalidArgument, "median kernel must be >= 1");
    if (*median_kernel % 2 == 0) throw Error(Errc::EvenKernel, "median kernel must be odd");
  }
  if (workers < 1) throw Error(Errc::InvalidArgument, "workers must be >= 1");
}

int auto_median_kernel(int height, int width) {
  const int side = std::min(height, width);
  const double target = 0.02 * side;
  int k = 2 * static_cast<int>(std::lround((target - 1.0) / 2.0)) + 1;
  k = std::max(k, 3);
  const int largest = side % 2 == 1 ? side : side - 1;
  return std::max(1, std::min(k, largest));
}

int PipelineConfig::resolve_median_kernel(int height, int width) const {
  return median_kernel ? *median_kernel : auto_median_kernel(height, width);
}

nlohmann::json to_json(const StageTimings& t) {
  return {{"cut_s", t.cut_s}, {"sim_s", t.sim_s}, {"gnt_s", t.gnt_s}, {"flt_s", t.flt_s}, {"total_s", t.total_s}};
}

}  // namespace selo
