// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>
#include <tuple>

#include "selo/log.hpp"
#include "selo/pipeline.hpp"

namespace selo {

namespace {

std::vector<int> origins(int extent, int side, double offset) {
  std::vector<int> out;
  if (offset == 0.0) {
    int o = 0;
    for (; o + side <= extent; o += side) out.push_back(o);
    if (out.back() + side < extent) out.push_back(extent - side);
  } else {
    for (int o = static_cast<int>(std::floor(offset * side)); o + side <= extent; o += side) out.push_back(o);
  }
  return out;
}

}  // namespace

std::vector<Tile> plan_tiles(int height, int width, const PipelineConfig& config) {
  config.validate();
  if (height <= 0 || width <= 0) throw Error(Errc::InvalidArgument, "image dimensions must be positive");

  std::vector<Tile> tiles;
  std::set<std::tuple<int, int, int>> seen;
  bool any = false;
  for (std::size_t si = 0; si < config.scales.size(); ++si) {
    const int side = config.scales[si];
    if (side > height || side > width) {
      spdlog::warn("scale {} skipped: image is {}x{}", side, width, height);
      continue;
    }
    any = true;
    for (std::size_t oi = 0; oi < config.offsets.size(); ++oi) {
      const auto ys = origins(height, side, config.offsets[oi]);
      const auto xs = origins(width, side, config.offsets[oi]);
      for (int y : ys) {
        for (int x : xs) {
          if (!seen.emplace(x, y, side).second) continue;
          tiles.push_back({x, y, side, static_cast<int>(si), static_cast<int>(oi)});
        }
      }
    }
  }
  if (!any) {
    throw Error(Errc::NoApplicableScale, "image " + std::to_string(width) + "x" + std::to_string(height) +
                                             " is smaller than every configured scale");
  }
  return tiles;
}

}  // namespace selo
