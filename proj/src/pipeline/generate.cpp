// SPDX-License-Identifier: Apache-2.0
#include <chrono>

#include "selo/pipeline.hpp"
#include "selo/scorer.hpp"

namespace selo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SeloResult generate_selo_map(const RasterRef& image, const std::string& query, Scorer& scorer,
                             const PipelineConfig& config) {
  config.validate();
  if (image.height <= 0 || image.width <= 0) throw Error(Errc::InvalidArgument, "image dimensions must be positive");
  SeloResult result;
  result.median_kernel = config.resolve_median_kernel(image.height, image.width);
  const auto start = Clock::now();

  auto t = Clock::now();
  const std::vector<Tile> tiles = plan_tiles(image.height, image.width, config);
  result.timings.cut_s = seconds_since(t);
  result.tile_count = tiles.size();

  t = Clock::now();
  const std::vector<double> scores = score_tiles(scorer, query, tiles, image, config.workers);
  result.timings.sim_s = seconds_since(t);

  t = Clock::now();
  ProbabilityMap stacked = stack_similarities(tiles, scores, image.height, image.width);
  result.timings.gnt_s = seconds_since(t);

  t = Clock::now();
  NormalizedMap normalized = normalize(median_filter(stacked, result.median_kernel));
  result.timings.flt_s = seconds_since(t);

  result.map = std::move(normalized.map);
  result.degenerate = normalized.degenerate;
  result.timings.total_s = seconds_since(start);
  return result;
}

}  // namespace selo
