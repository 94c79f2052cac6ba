// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selo/raster.hpp"

namespace selo {

class Scorer;

/// One sliding-window slice.
struct Tile {
  int x0 = 0;
  int y0 = 0;
  int side = 0;
  int scale_index = 0;
  int offset_index = 0;
  friend bool operator==(const Tile&, const Tile&) = default;
};

struct PipelineConfig {
  std::vector<int> scales{256, 512, 768};
  std::vector<double> offsets{0.0, 0.5};
  std::optional<int> median_kernel;  // nullopt = auto
  int workers = 1;                    // threads used to score tiles

  void validate() const;
  [[nodiscard]] int resolve_median_kernel(int height, int width) const;
};

/// round(0.02 * min(H, W)) to the nearest odd integer, at least 3 and at most
/// the largest odd value <= min(H, W).
int auto_median_kernel(int height, int width);

struct StageTimings {
  double cut_s = 0.0;
  double sim_s = 0.0;
  double gnt_s = 0.0;
  double flt_s = 0.0;
  double total_s = 0.0;
};

nlohmann::json to_json(const StageTimings& t);

/// Pixel dimensions of a raster plus where to find its pixels. Built-in scorers
/// never open the file.
struct RasterRef {
  std::filesystem::path path;
  int height = 0;
  int width = 0;
};

/// Multi-scale, multi-offset grid. Offset 0 clamps the last row/column so the
/// image is fully covered; fractional offsets keep only fully contained tiles.
/// Scales larger than min(H, W) are skipped with a warning.
std::vector<Tile> plan_tiles(int height, int width, const PipelineConfig& config);

/// Pixel-level mean of the (negative-clamped) scores of every tile covering
/// the pixel. Scores are rounded to float and accumulated in single precision
/// in tile order.
ProbabilityMap stack_similarities(const std::vector<Tile>& tiles, const std::vector<double>& scores, int height,
                                  int width);

/// Per-pixel coverage count of a tile set.
Raster<std::uint16_t> coverage_count(const std::vector<Tile>& tiles, int height, int width);

/// kernel x kernel median with reflect padding (edge sample repeated:
/// d c b a | a b c d | d c b a). kernel 1 is the identity.
ProbabilityMap median_filter(const ProbabilityMap& map, int kernel);

namespace detail {
// Exposed for the equivalence tests; median_filter picks between them.
ProbabilityMap median_filter_network(const ProbabilityMap& map, int kernel);
ProbabilityMap median_filter_histogram(const ProbabilityMap& map, int kernel);
}  // namespace detail

struct NormalizedMap {
  ProbabilityMap map;
  bool degenerate = false;
};

/// Min-max rescale to [0, 1]. A constant input yields all zeros and degenerate = true.
NormalizedMap normalize(const ProbabilityMap& map);

struct SeloResult {
  ProbabilityMap map;
  bool degenerate = false;
  StageTimings timings;
  std::size_t tile_count = 0;
  int median_kernel = 1;
};

/// plan -> score -> stack -> median filter -> normalize, timing each stage.
SeloResult generate_selo_map(const RasterRef& image, const std::string& query, Scorer& scorer,
                             const PipelineConfig& config);

}  // namespace selo
