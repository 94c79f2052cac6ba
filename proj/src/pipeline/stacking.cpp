// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>

#include "selo/pipeline.hpp"
#include "selo/simd/kernels.hpp"

namespace selo {

namespace {

void check_tile(const Tile& t, int height, int width) {
  if (t.side <= 0 || t.x0 < 0 || t.y0 < 0 || t.x0 + t.side > width || t.y0 + t.side > height) {
    throw Error(Errc::InvalidArgument, "tile (" + std::to_string(t.x0) + "," + std::to_string(t.y0) + ") side " +
                                           std::to_string(t.side) + " is outside the image");
  }
}

}  // namespace

Raster<std::uint16_t> coverage_count(const std::vector<Tile>& tiles, int height, int width) {
  if (tiles.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(Errc::CountOverflow, "more tiles than the coverage counter can hold");
  }
  Raster<std::uint16_t> count(height, width, 0);
  for (const Tile& t : tiles) {
    check_tile(t, height, width);
    for (int r = t.y0; r < t.y0 + t.side; ++r) {
      auto row = count.row(r).subspan(static_cast<std::size_t>(t.x0), static_cast<std::size_t>(t.side));
      for (auto& c : row) c = static_cast<std::uint16_t>(c + 1);
    }
  }
  return count;
}

ProbabilityMap stack_similarities(const std::vector<Tile>& tiles, const std::vector<double>& scores, int height,
                                  int width) {
  if (tiles.size() != scores.size()) {
    throw Error(Errc::LengthMismatch,
                std::to_string(tiles.size()) + " tiles but " + std::to_string(scores.size()) + " scores");
  }
  if (tiles.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(Errc::CountOverflow, "more tiles than the coverage counter can hold");
  }
  const auto& k = simd::active_kernels();
  Raster<float> sum(height, width, 0.0f);
  Raster<std::uint16_t> count(height, width, 0);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const Tile& t = tiles[i];
    check_tile(t, height, width);
    if (!std::isfinite(scores[i])) throw Error(Errc::InvalidArgument, "tile score is not finite");
    const auto s = static_cast<float>(scores[i]);
    const float clamped = s > 0.0f ? s : 0.0f;
    for (int r = t.y0; r < t.y0 + t.side; ++r) {
      k.accumulate(sum.row(r).data() + t.x0, count.row(r).data() + t.x0, static_cast<std::size_t>(t.side), clamped);
    }
  }
  ProbabilityMap out(height, width, 0.0f);
  // Identical scores: the float sum/count round trip would drift by an ulp
  // here and there, and normalize must see a truly constant map.
  if (!tiles.empty() && std::all_of(scores.begin(), scores.end(), [&](double v) {
        return std::max(static_cast<float>(v), 0.0f) == std::max(static_cast<float>(scores.front()), 0.0f);
      })) {
    const float v = std::max(static_cast<float>(scores.front()), 0.0f);
    std::size_t uncovered = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (count.data()[i] == 0) ++uncovered;
      out.data()[i] = v;
    }
    if (uncovered != 0) {
      throw Error(Errc::UncoveredPixel, std::to_string(uncovered) + " pixels are not covered by any tile");
    }
    return out;
  }
  const std::size_t uncovered = k.divide(sum.data(), count.data(), out.data(), out.size());
  if (uncovered != 0) {
    throw Error(Errc::UncoveredPixel, std::to_string(uncovered) + " pixels are not covered by any tile");
  }
  return out;
}

}  // namespace selo
