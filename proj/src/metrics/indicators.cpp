// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "selo/metrics.hpp"

namespace selo {

namespace {

void check_lengths(const std::vector<std::vector<AttentionPoint>>& attention,
                   const std::vector<GtRegionContext>& contexts) {
  if (contexts.empty()) throw Error(Errc::EmptyGt, "no ground-truth regions");
  if (attention.size() != contexts.size()) {
    throw Error(Errc::LengthMismatch, "attention lists and regions differ in length");
  }
}

}  // namespace

double region_offset(const std::vector<AttentionPoint>& points, const GtRegionContext& context) {
  if (points.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& p : points) sum += std::hypot(p.x - context.center.x, p.y - context.center.y);
  const double off = sum / static_cast<double>(points.size()) / context.candidate_radius;
  return std::clamp(off, 0.0, 1.0);
}

double region_discrete(const std::vector<AttentionPoint>& points, const GtRegionContext& context,
                       const MetricParams& params, std::optional<double>* divergence) {
  if (divergence) divergence->reset();
  const std::size_t l = points.size();
  if (l == 0) return 0.0;
  if (l == 1) return 1.0;
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : points) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(l);
  cy /= static_cast<double>(l);
  double spread = 0.0;
  for (const auto& p : points) spread += std::hypot(p.x - cx, p.y - cy);
  const double d_pd = spread / (static_cast<double>(l) * context.candidate_radius);
  if (divergence) *divergence = d_pd;
  return ((1.0 - d_pd) + std::exp(-params.eta * (static_cast<double>(l) + 2.0))) / 2.0;
}

double compute_ras(const std::vector<std::vector<AttentionPoint>>& attention,
                   const std::vector<GtRegionContext>& contexts, const MetricParams& params) {
  check_lengths(attention, contexts);
  const double denom = std::expm1(params.beta);
  double sum = 0.0;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    const double off = region_offset(attention[i], contexts[i]);
    sum += std::expm1(off * params.beta) / denom;
  }
  return sum / static_cast<double>(contexts.size());
}

double compute_rda(const std::vector<std::vector<AttentionPoint>>& attention,
                   const std::vector<GtRegionContext>& contexts, const MetricParams& params) {
  check_lengths(attention, contexts);
  double sum = 0.0;
  for (std::size_t i = 0; i < contexts.size(); ++i) sum += region_discrete(attention[i], contexts[i], params);
  return sum / static_cast<double>(contexts.size());
}

double compute_rmi(double r_su, double r_as, double r_da, const MetricParams& params) {
  return params.w_su * r_su + params.w_as * (1.0 - r_as) + params.w_da * r_da;
}

}  // namespace selo
