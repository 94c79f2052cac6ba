// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selo/annotations.hpp"
#include "selo/pipeline.hpp"

namespace selo {

struct MetricParams {
  double alpha = 0.694;
  double eps = 1e-7;
  double expansion = 1.5;
  double beta = 3.0;
  double eta = 0.5;
  double rho = 0.5;
  int nms_window = 5;
  double w_su = 0.4;
  double w_as = 0.35;
  double w_da = 0.25;

  void validate() const;
};

/// Unknown keys are rejected; missing keys keep their current value.
void apply_params_json(MetricParams& params, const nlohmann::json& doc);
MetricParams load_params(const std::filesystem::path& path);
nlohmann::json to_json(const MetricParams& params);

struct AttentionPoint {
  double x = 0.0;
  double y = 0.0;
  double prob = 0.0;
  friend bool operator==(const AttentionPoint&, const AttentionPoint&) = default;
};

struct RegionDiagnostics {
  std::size_t attention_count = 0;  // K
  double offset = 1.0;              // off_i after clipping
  std::optional<double> divergence;  // d_pd, only for K >= 2
  double discrete = 0.0;             // per-region R_da term
  std::vector<AttentionPoint> points;
};

struct SeLoScores {
  double r_su = 0.0;
  double r_as = 1.0;
  double r_da = 0.0;
  double r_mi = 0.0;
  std::vector<RegionDiagnostics> regions;
  std::optional<StageTimings> timings;
};

nlohmann::json to_json(const SeLoScores& scores, bool with_regions = true);

/// 1 - exp(-alpha * t_l * t_r) over the union of the masks. A union covering
/// the whole image yields 0 with a warning.
double compute_rsu(const ProbabilityMap& map, const std::vector<Mask>& masks, const MetricParams& params);

/// Plateaus (8-connected equal-valued components) whose every pixel equals the
/// maximum of its window x window neighborhood, clipped at the image border.
/// Each is reported once, at the centroid of its pixel centers.
std::vector<AttentionPoint> find_local_maxima(const ProbabilityMap& map, int window);

/// Local maxima with prob > rho inside the closed candidate disk.
std::vector<AttentionPoint> detect_attention(const ProbabilityMap& map, const GtRegionContext& context,
                                             const MetricParams& params);
std::vector<AttentionPoint> filter_attention(const std::vector<AttentionPoint>& maxima,
                                             const GtRegionContext& context, const MetricParams& params);

double region_offset(const std::vector<AttentionPoint>& points, const GtRegionContext& context);
double region_discrete(const std::vector<AttentionPoint>& points, const GtRegionContext& context,
                       const MetricParams& params, std::optional<double>* divergence = nullptr);

double compute_ras(const std::vector<std::vector<AttentionPoint>>& attention,
                   const std::vector<GtRegionContext>& contexts, const MetricParams& params);
double compute_rda(const std::vector<std::vector<AttentionPoint>>& attention,
                   const std::vector<GtRegionContext>& contexts, const MetricParams& params);
double compute_rmi(double r_su, double r_as, double r_da, const MetricParams& params);

SeLoScores evaluate_case(const ProbabilityMap& map, const TestCase& test_case, const MetricParams& params);

struct AggregateScores {
  std::size_t cases = 0;
  double r_su = 0.0;
  double r_as = 0.0;
  double r_da = 0.0;
  double r_mi = 0.0;
};

/// Unweighted mean over cases. Throws EmptyList.
AggregateScores aggregate(const std::vector<SeLoScores>& scores);
nlohmann::json to_json(const AggregateScores& agg);

}  // namespace selo
