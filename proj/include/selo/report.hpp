// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selo/annotations.hpp"
#include "selo/metrics.hpp"
#include "selo/pipeline.hpp"
#include "selo/scorer.hpp"

namespace selo {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  std::filesystem::path manifest;
  ScorerSpec scorer;
  PipelineConfig pipeline;
  MetricParams params;
  std::filesystem::path out_dir;
  bool render = false;
  std::uint64_t seed = 0;
  int workers = 1;  // cases processed concurrently

  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);

/// Outcome of one case. Exactly one of `error` and the result fields is meaningful.
struct CaseResult {
  std::string id;
  std::string image;
  std::optional<std::string> error;
  std::optional<SeLoScores> scores;
  std::optional<StageTimings> timings;
  bool degenerate = false;
  std::size_t tile_count = 0;
  int median_kernel = 0;
};

struct RunReport {
  std::string tool_version = kToolVersion;
  nlohmann::json config;
  std::vector<CaseResult> cases;              // sorted by id
  std::optional<AggregateScores> aggregate;   // over cases without error

  [[nodiscard]] bool ok() const noexcept;
  [[nodiscard]] nlohmann::json to_json() const;
  /// Columns Case, R_su, R_da, R_as, R_mi; failed cases leave the scores empty;
  /// a closing "mean" row carries the aggregate.
  [[nodiscard]] std::string to_csv() const;
};

/// Recomputes the aggregate from the per-case entries.
std::optional<AggregateScores> aggregate_cases(const std::vector<CaseResult>& cases);

/// Case id made safe for use as a file name stem.
std::string case_stem(const std::string& id);

/// One map pair, timing file and optional overlay per case.
std::vector<CaseResult> cmd_generate(const RunConfig& config);

/// Scores `<case>.npy` (or `<case>.png`) from `maps_dir` against the manifest.
/// Writes report.json and report.csv into `out_dir` when it is nonempty.
RunReport cmd_evaluate(const std::filesystem::path& maps_dir, const std::filesystem::path& manifest,
                       const MetricParams& params, const std::filesystem::path& out_dir, int workers = 1);

/// generate followed by evaluate on the in-memory maps.
RunReport cmd_run(const RunConfig& config);

struct AblationRow {
  std::string name;
  std::vector<int> scales;
  RunReport report;
  StageTimings total;
};

/// Six named scale sets s1..s6: {128,256} {256,512} {512,768} {128,256,512}
/// {256,512,768} {128,256,512,768}.
const std::vector<std::pair<std::string, std::vector<int>>>& ablation_scale_sets();

/// One cmd_run per scale set under `<out>/<name>`, plus ablation.json/.csv.
std::vector<AblationRow> cmd_ablation(const RunConfig& config);

/// Overlay of a map on its source image with the case's polygons outlined.
void cmd_render(const std::filesystem::path& map_path, const std::filesystem::path& image_path,
                const std::vector<Polygon>& regions, const std::filesystem::path& output);

nlohmann::json cmd_stats(const std::filesystem::path& manifest);

}  // namespace selo
