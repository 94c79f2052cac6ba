// SPDX-License-Identifier: Apache-2.0
#include "selo/pipeline.hpp"
#include "selo/simd/kernels.hpp"

namespace selo {

NormalizedMap normalize(const ProbabilityMap& map) {
  if (map.empty()) throw Error(Errc::InvalidArgument, "cannot normalize an empty map");
  const auto& k = simd::active_kernels();
  float lo = 0.0f;
  float hi = 0.0f;
  k.minmax(map.data(), map.size(), &lo, &hi);
  if (!(hi > lo)) return {ProbabilityMap(map.height(), map.width(), 0.0f), true};
  NormalizedMap out{map, false};
  k.normalize(out.map.data(), out.map.size(), lo, hi - lo);
  return out;
}

}  // namespace selo
