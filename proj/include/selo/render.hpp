// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "selo/annotations.hpp"
#include "selo/image_io.hpp"
#include "selo/pipeline.hpp"

namespace selo {

/// Fixed 256-entry black-red-yellow-white table; index = round(p * 255).
std::array<std::uint8_t, 3> colormap(float p);

/// out = (src + colormap(map)) / 2 per channel (floor), then every polygon is
/// outlined in green.
RgbImage render_overlay(const RgbImage& source, const ProbabilityMap& map, const std::vector<Polygon>& regions);

}  // namespace selo
