// SPDX-License-Identifier: Apache-2.0
#include "selo/metrics.hpp"

namespace selo {

SeLoScores evaluate_case(const ProbabilityMap& map, const TestCase& test_case, const MetricParams& params) {
  params.validate();
  check_probability_map(map);
  if (test_case.regions.empty()) throw Error(Errc::EmptyGt, "case '" + test_case.id + "' has no regions");

  std::vector<GtRegionContext> contexts;
  std::vector<Mask> masks;
  for (const Polygon& poly : test_case.regions) {
    if (!poly.within(map.height(), map.width())) {
      throw Error(Errc::DimMismatch, "case '" + test_case.id + "' has a region outside the map");
    }
    try {
      contexts.push_back(make_region_context(poly, map.height(), map.width(), params.expansion));
      masks.push_back(contexts.back().mask);
    } catch (const Error& e) {
      // A sliver polygon may cover no pixel center; it still defines a
      // candidate disk, only its mask is empty.
      if (e.code() != Errc::EmptyMask) throw;
      contexts.push_back({Mask(map.height(), map.width(), 0), region_center(poly),
                          candidate_radius(poly, params.expansion), poly});
    }
  }

  SeLoScores scores;
  scores.r_su = compute_rsu(map, masks, params);

  const std::vector<AttentionPoint> maxima = find_local_maxima(map, params.nms_window);
  std::vector<std::vector<AttentionPoint>> attention;
  for (const auto& ctx : contexts) attention.push_back(filter_attention(maxima, ctx, params));

  scores.r_as = compute_ras(attention, contexts, params);
  scores.r_da = compute_rda(attention, contexts, params);
  scores.r_mi = compute_rmi(scores.r_su, scores.r_as, scores.r_da, params);
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    RegionDiagnostics d;
    d.attention_count = attention[i].size();
    d.offset = region_offset(attention[i], contexts[i]);
    d.discrete = region_discrete(attention[i], contexts[i], params, &d.divergence);
    d.points = attention[i];
    scores.regions.push_back(std::move(d));
  }
  return scores;
}

AggregateScores aggregate(const std::vector<SeLoScores>& scores) {
  if (scores.empty()) throw Error(Errc::EmptyList, "nothing to aggregate");
  AggregateScores agg;
  agg.cases = scores.size();
  for (const auto& s : scores) {
    agg.r_su += s.r_su;
    agg.r_as += s.r_as;
    agg.r_da += s.r_da;
    agg.r_mi += s.r_mi;
  }
  const auto n = static_cast<double>(scores.size());
  agg.r_su /= n;
  agg.r_as /= n;
  agg.r_da /= n;
  agg.r_mi /= n;
  return agg;
}

nlohmann::json to_json(const AggregateScores& agg) {
  return {{"cases", agg.cases}, {"R_su", agg.r_su}, {"R_as", agg.r_as}, {"R_da", agg.r_da}, {"R_mi", agg.r_mi}};
}

nlohmann::json to_json(const SeLoScores& s, bool with_regions) {
  nlohmann::json j = {{"R_su", s.r_su}, {"R_as", s.r_as}, {"R_da", s.r_da}, {"R_mi", s.r_mi}};
  if (with_regions) {
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : s.regions) {
      nlohmann::json points = nlohmann::json::array();
      for (const auto& p : r.points) points.push_back({{"x", p.x}, {"y", p.y}, {"prob", p.prob}});
      regions.push_back({{"attention_count", r.attention_count},
                         {"offset", r.offset},
                         {"divergence", r.divergence ? nlohmann::json(*r.divergence) : nlohmann::json()},
                         {"discrete", r.discrete},
                         {"points", points}});
    }
    j["regions"] = regions;
  }
  if (s.timings) j["timings"] = to_json(*s.timings);
  return j;
}

}  // namespace selo
