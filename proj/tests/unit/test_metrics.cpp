// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "selo/metrics.hpp"
#include "test_support.hpp"

using namespace selo;

namespace {

Mask box_mask(int h, int w, int x0, int y0, int x1, int y1) {
  Mask m(h, w, 0);
  for (int r = y0; r < y1; ++r) {
    for (int c = x0; c < x1; ++c) m(r, c) = 1;
  }
  return m;
}

GtRegionContext context_at(double cx, double cy, double radius) {
  return {Mask(1, 1, 1), {cx, cy}, radius, Polygon({{0, 0}, {1, 0}, {0, 1}})};
}

ProbabilityMap bump(int h, int w, double cx, double cy, double sigma) {
  ProbabilityMap m(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double dx = c + 0.5 - cx;
      const double dy = r + 0.5 - cy;
      m(r, c) = static_cast<float>(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)));
    }
  }
  return m;
}

}  // namespace

TEST(MetricParams, DefaultsAndValidation) {
  const MetricParams p;
  EXPECT_EQ(p.alpha, 0.694);
  EXPECT_EQ(p.eps, 1e-7);
  EXPECT_EQ(p.expansion, 1.5);
  EXPECT_EQ(p.beta, 3.0);
  EXPECT_EQ(p.eta, 0.5);
  EXPECT_EQ(p.rho, 0.5);
  EXPECT_EQ(p.nms_window, 5);
  EXPECT_NO_THROW(p.validate());
  for (auto mutate : std::vector<std::function<void(MetricParams&)>>{
           [](MetricParams& q) { q.alpha = 0; }, [](MetricParams& q) { q.beta = -1; },
           [](MetricParams& q) { q.eta = 0; }, [](MetricParams& q) { q.expansion = 0; },
           [](MetricParams& q) { q.rho = 1.5; }, [](MetricParams& q) { q.nms_window = 4; },
           [](MetricParams& q) { q.w_su = 0.5; }, [](MetricParams& q) { q.w_as = -0.1; }}) {
    MetricParams q;
    mutate(q);
    EXPECT_THROW(q.validate(), Error);
  }
}

TEST(MetricParams, JsonFileAndOverrides) {
  test::TempDir dir;
  test::spit(dir / "p.json", R"({"alpha": 1.0, "rho": 0.25, "weights": [0.5, 0.25, 0.25], "nms_window": 3})");
  const MetricParams p = load_params(dir / "p.json");
  EXPECT_EQ(p.alpha, 1.0);
  EXPECT_EQ(p.rho, 0.25);
  EXPECT_EQ(p.w_su, 0.5);
  EXPECT_EQ(p.nms_window, 3);
  EXPECT_EQ(p.beta, 3.0);
  test::spit(dir / "bad.json", R"({"alhpa": 1.0})");
  EXPECT_THROW(load_params(dir / "bad.json"), Error);
  MetricParams q;
  apply_params_json(q, to_json(p));
  EXPECT_EQ(to_json(q), to_json(p));
}

TEST(Rsu, UniformMapCalibration) {
  const MetricParams p;
  const double expected = 1.0 - std::exp(-0.694);
  EXPECT_NEAR(compute_rsu(ProbabilityMap(512, 512, 0.7f), {box_mask(512, 512, 100, 100, 164, 164)}, p), expected,
              1e-6);
  EXPECT_NEAR(compute_rsu(ProbabilityMap(37, 91, 1.0f), {box_mask(37, 91, 0, 0, 3, 1)}, p), expected, 1e-6);
}

TEST(Rsu, AllMassInside) {
  ProbabilityMap m(16, 16, 0.0f);
  const Mask gt = box_mask(16, 16, 4, 4, 8, 8);
  for (int r = 4; r < 8; ++r) {
    for (int c = 4; c < 8; ++c) m(r, c) = 1.0f;
  }
  EXPECT_NEAR(compute_rsu(m, {gt}, MetricParams{}), 1.0, 1e-12);
}

TEST(Rsu, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(31);
  const MetricParams p;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_map(rng, 8, 8);
    const Mask gt = box_mask(8, 8, trial % 4, trial % 3, trial % 4 + 4, trial % 3 + 4);
    EXPECT_NEAR(compute_rsu(m, {gt}, p), oracle::rsu(m, {gt}, p.alpha, p.eps), 1e-12);
  }
}

TEST(Rsu, OverlappingMasksUnioned) {
  std::mt19937_64 rng(32);
  const auto m = oracle::random_map(rng, 20, 20);
  const Mask a = box_mask(20, 20, 2, 2, 10, 10);
  const Mask b = box_mask(20, 20, 5, 5, 14, 14);
  const double value = compute_rsu(m, {a, b}, MetricParams{});
  EXPECT_NEAR(value, oracle::rsu(m, {a, b}, 0.694, 1e-7), 1e-12);
  EXPECT_EQ(value, compute_rsu(m, {b, a, a}, MetricParams{}));
}

TEST(Rsu, EdgeCases) {
  const MetricParams p;
  EXPECT_EQ(compute_rsu(ProbabilityMap(4, 4, 0.5f), {Mask(4, 4, 1)}, p), 0.0);
  EXPECT_EQ(compute_rsu(ProbabilityMap(4, 4, 0.0f), {box_mask(4, 4, 0, 0, 2, 2)}, p), 0.0);
  try {
    compute_rsu(ProbabilityMap(4, 4, 0.5f), {Mask(4, 4, 0)}, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyGt);
  }
  EXPECT_THROW(compute_rsu(ProbabilityMap(4, 4, 0.5f), {}, p), Error);
}

TEST(Rsu, MovingMassIntoGtIncreases) {
  std::mt19937_64 rng(33);
  auto m = oracle::random_map(rng, 12, 12);
  const Mask gt = box_mask(12, 12, 3, 3, 7, 7);
  double prev = compute_rsu(m, {gt}, MetricParams{});
  for (int step = 0; step < 10; ++step) {
    const float take = std::min(0.05f, m(0, step));
    ASSERT_GT(take, 0.0f);
    m(0, step) -= take;
    m(4, 4) += take;
    const double now = compute_rsu(m, {gt}, MetricParams{});
    EXPECT_GT(now, prev);
    prev = now;
  }
}

TEST(Rsu, ScaleInvariance) {
  std::mt19937_64 rng(34);
  const auto m = oracle::random_map(rng, 30, 30);
  const Mask gt = box_mask(30, 30, 5, 5, 15, 15);
  MetricParams zero_eps;
  zero_eps.eps = 0.0;
  ProbabilityMap scaled = m;
  for (auto& v : scaled.values()) v *= 0.5f;
  EXPECT_NEAR(compute_rsu(scaled, {gt}, zero_eps), compute_rsu(m, {gt}, zero_eps), 1e-12);
  EXPECT_LT(std::abs(compute_rsu(scaled, {gt}, MetricParams{}) - compute_rsu(m, {gt}, MetricParams{})), 1e-4);
}

TEST(LocalMaxima, SingleBump) {
  const auto m = normalize(bump(40, 40, 20, 20, 4)).map;
  const auto pts = detect_attention(m, context_at(20, 20, 10), MetricParams{});
  ASSERT_EQ(pts.size(), 1u);
  // Four pixels share the apex; their centroid is the bump center.
  EXPECT_DOUBLE_EQ(pts[0].x, 20.0);
  EXPECT_DOUBLE_EQ(pts[0].y, 20.0);
}

TEST(LocalMaxima, ZeroMapHasNoAttention) {
  EXPECT_TRUE(detect_attention(ProbabilityMap(16, 16, 0.0f), context_at(8, 8, 100), MetricParams{}).empty());
}

TEST(LocalMaxima, MatchesBruteForceOracle) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::random_map(rng, 32, 32, trial % 2 ? 0 : 3);
    for (int window : {3, 5}) {
      ASSERT_EQ(find_local_maxima(m, window), oracle::local_maxima(m, window)) << trial << " w" << window;
    }
  }
}

TEST(LocalMaxima, PlateauCollapsesToCentroid) {
  ProbabilityMap m(10, 10, 0.0f);
  for (int c = 2; c < 7; ++c) m(5, c) = 0.9f;
  const auto pts = find_local_maxima(m, 3);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].x, 4.5);
  EXPECT_DOUBLE_EQ(pts[0].y, 5.5);
  // A plateau touching a higher pixel within the window is not a maximum.
  m(7, 7) = 1.0f;
  EXPECT_EQ(find_local_maxima(m, 3).size(), 2u);
  EXPECT_EQ(find_local_maxima(m, 5).size(), 1u);
}

TEST(LocalMaxima, FilteringByThresholdAndDisk) {
  ProbabilityMap m(20, 20, 0.1f);
  m(2, 2) = 0.9f;    // far away
  m(10, 10) = 0.4f;  // below rho
  m(12, 13) = 0.8f;
  const auto pts = detect_attention(m, context_at(12, 12, 3), MetricParams{});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].x, 13.5);
  EXPECT_EQ(pts[0].y, 12.5);
  // Closed disk: a point exactly on the rim is kept.
  EXPECT_EQ(detect_attention(m, context_at(13.5, 9.5, 3), MetricParams{}).size(), 1u);
}

TEST(LocalMaxima, FloorBelowThresholdAddsNothing) {
  std::mt19937_64 rng(36);
  const auto m = normalize(bump(48, 48, 20, 24, 5)).map;
  ProbabilityMap floored = m;
  for (auto& v : floored.values()) v = std::max(v, 0.2f);
  const MetricParams p;
  const auto ctx = context_at(20, 24, 100);
  EXPECT_EQ(detect_attention(floored, ctx, p), detect_attention(m, ctx, p));
  EXPECT_EQ(detect_attention(m, ctx, p), detect_attention(m, ctx, p));
}

TEST(Ras, Branches) {
  const MetricParams p;
  const auto ctx = context_at(10, 10, 5);
  EXPECT_EQ(compute_ras({{{10, 10, 0.9}}}, {ctx}, p), 0.0);
  EXPECT_EQ(compute_ras({{}}, {ctx}, p), 1.0);
  EXPECT_NEAR(compute_ras({{{15, 10, 0.9}}}, {ctx}, p), 1.0, 1e-15);
  const double expected = (std::exp(1.2) - 1) / (std::exp(3.0) - 1);
  EXPECT_NEAR(compute_ras({{{11, 10, 0.9}, {10, 13, 0.9}}}, {ctx}, p), expected, 1e-12);
  // off is clipped at 1 for points outside the disk.
  EXPECT_NEAR(compute_ras({{{30, 10, 0.9}}}, {ctx}, p), 1.0, 1e-15);
  EXPECT_THROW(compute_ras({}, {}, p), Error);
  EXPECT_THROW(compute_ras({{}, {}}, {ctx}, p), Error);
}

TEST(Ras, MonotoneInOffset) {
  const MetricParams p;
  const auto ctx = context_at(0, 0, 10);
  double prev = -1;
  for (int d = 0; d <= 10; ++d) {
    const double v = compute_ras({{{static_cast<double>(d), 0, 0.9}}}, {ctx}, p);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Rda, Branches) {
  const MetricParams p;
  const auto ctx = context_at(10, 10, 5);
  EXPECT_EQ(compute_rda({{{10, 10, 0.9}}}, {ctx}, p), 1.0);
  EXPECT_EQ(compute_rda({{}}, {ctx}, p), 0.0);
  EXPECT_NEAR(compute_rda({{{12, 11, 0.9}, {12, 11, 0.7}}}, {ctx}, p), (1 + std::exp(-2.0)) / 2, 1e-12);
  EXPECT_NEAR((1 + std::exp(-2.0)) / 2, 0.5677, 1e-4);
  // Three collinear points: cluster center (11, 10), spread (1 + 0 + 1) / (3 * 5).
  EXPECT_NEAR(compute_rda({{{10, 10, 0.9}, {11, 10, 0.9}, {12, 10, 0.9}}}, {ctx}, p),
              ((1 - 2.0 / 15) + std::exp(-0.5 * 5)) / 2, 1e-12);
  // Per-region values are averaged.
  EXPECT_NEAR(compute_rda({{{10, 10, 0.9}}, {}}, {ctx, ctx}, p), 0.5, 1e-15);
}

TEST(Rmi, ReferenceRowsAndExtremes) {
  const MetricParams p;
  EXPECT_NEAR(compute_rmi(0.6920, 0.3323, 0.6667, p), 0.6772, 5e-4);
  EXPECT_NEAR(compute_rmi(0.6682, 0.2694, 0.7072, p), 0.6998, 5e-4);
  EXPECT_DOUBLE_EQ(compute_rmi(1, 0, 1, p), 1.0);
  EXPECT_DOUBLE_EQ(compute_rmi(0, 1, 0, p), 0.0);
}

TEST(EvaluateCase, DegenerateMap) {
  const TestCase tc{"c", "q", {Polygon({{4, 4}, {12, 4}, {12, 12}, {4, 12}})}};
  const auto s = evaluate_case(ProbabilityMap(32, 32, 0.0f), tc, MetricParams{});
  EXPECT_EQ(s.r_su, 0.0);
  EXPECT_EQ(s.r_as, 1.0);
  EXPECT_EQ(s.r_da, 0.0);
  EXPECT_EQ(s.r_mi, 0.0);
  EXPECT_EQ(s.regions[0].attention_count, 0u);
}

TEST(EvaluateCase, BumpAtCenter) {
  const TestCase tc{"c", "q", {Polygon({{40, 30}, {80, 30}, {80, 70}, {40, 70}})}};
  const auto m = normalize(bump(100, 120, 60, 50, 8)).map;
  const auto s = evaluate_case(m, tc, MetricParams{});
  EXPECT_LE(s.r_as, 0.05);
  EXPECT_EQ(s.r_da, 1.0);
  EXPECT_GT(s.r_su, 0.9);
  EXPECT_NEAR(s.r_mi, compute_rmi(s.r_su, s.r_as, s.r_da, MetricParams{}), 1e-15);
}

TEST(EvaluateCase, MatchesComposedOracle) {
  std::mt19937_64 rng(37);
  const TestCase tc{"c", "q", {Polygon({{4, 4}, {20, 6}, {16, 22}}), Polygon({{24, 20}, {30, 20}, {30, 30}, {24, 30}})}};
  const MetricParams p;
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = oracle::random_map(rng, 32, 32, trial % 2 ? 0 : 4);
    const auto s = evaluate_case(m, tc, p);
    std::vector<Mask> masks;
    std::vector<std::vector<AttentionPoint>> att;
    const auto maxima = oracle::local_maxima(m, p.nms_window);
    double ras = 0;
    double rda = 0;
    for (const auto& poly : tc.regions) {
      masks.push_back(oracle::raster(poly, 32, 32));
      double cx = 0, cy = 0;
      for (const auto& v : poly.vertices()) {
        cx += v.x / poly.size();
        cy += v.y / poly.size();
      }
      double rad = 0;
      for (const auto& v : poly.vertices()) rad += std::hypot(v.x - cx, v.y - cy);
      rad *= p.expansion / poly.size();
      std::vector<AttentionPoint> pts;
      for (const auto& q : maxima) {
        if (q.prob > p.rho && std::hypot(q.x - cx, q.y - cy) <= rad) pts.push_back(q);
      }
      double off = 1;
      if (!pts.empty()) {
        off = 0;
        for (const auto& q : pts) off += std::hypot(q.x - cx, q.y - cy);
        off = std::min(1.0, off / pts.size() / rad);
      }
      ras += (std::exp(off * p.beta) - 1) / (std::exp(p.beta) - 1);
      if (pts.size() == 1) {
        rda += 1;
      } else if (pts.size() > 1) {
        double mx = 0, my = 0;
        for (const auto& q : pts) {
          mx += q.x / pts.size();
          my += q.y / pts.size();
        }
        double spread = 0;
        for (const auto& q : pts) spread += std::hypot(q.x - mx, q.y - my);
        rda += ((1 - spread / (pts.size() * rad)) + std::exp(-p.eta * (pts.size() + 2.0))) / 2;
      }
    }
    ras /= 2;
    rda /= 2;
    const double rsu = oracle::rsu(m, masks, p.alpha, p.eps);
    EXPECT_NEAR(s.r_su, rsu, 1e-12);
    EXPECT_NEAR(s.r_as, ras, 1e-12);
    EXPECT_NEAR(s.r_da, rda, 1e-12);
    EXPECT_NEAR(s.r_mi, 0.4 * rsu + 0.35 * (1 - ras) + 0.25 * rda, 1e-12);
  }
}

TEST(EvaluateCase, Errors) {
  const TestCase tc{"c", "q", {Polygon({{4, 4}, {12, 4}, {12, 12}, {4, 12}})}};
  EXPECT_THROW(evaluate_case(ProbabilityMap(8, 8, 0.0f), tc, MetricParams{}), Error);
  EXPECT_THROW(evaluate_case(ProbabilityMap(16, 16, 0.0f), TestCase{"c", "q", {}}, MetricParams{}), Error);
  ProbabilityMap bad(16, 16, 0.0f);
  bad(0, 0) = -1.0f;
  EXPECT_THROW(evaluate_case(bad, tc, MetricParams{}), Error);
}

TEST(Aggregate, Means) {
  SeLoScores a;
  a.r_su = 0.2;
  a.r_as = 0.4;
  a.r_da = 1.0;
  a.r_mi = 0.4;
  SeLoScores b = a;
  b.r_mi = 0.6;
  b.r_su = 0.4;
  const auto one = aggregate({a});
  EXPECT_EQ(one.r_mi, 0.4);
  EXPECT_EQ(one.r_su, 0.2);
  const auto two = aggregate({a, b});
  EXPECT_NEAR(two.r_mi, 0.5, 1e-15);
  EXPECT_NEAR(two.r_su, 0.3, 1e-15);
  EXPECT_EQ(two.cases, 2u);
  try {
    aggregate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyList);
  }
}

TEST(Aggregate, TenCaseSpreadsheet) {
  std::mt19937_64 rng(38);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<SeLoScores> cases(10);
  double sums[4] = {0, 0, 0, 0};
  for (auto& c : cases) {
    c.r_su = u(rng);
    c.r_as = u(rng);
    c.r_da = u(rng);
    c.r_mi = u(rng);
    sums[0] += c.r_su;
    sums[1] += c.r_as;
    sums[2] += c.r_da;
    sums[3] += c.r_mi;
  }
  const auto agg = aggregate(cases);
  EXPECT_NEAR(agg.r_su, sums[0] / 10, 1e-15);
  EXPECT_NEAR(agg.r_as, sums[1] / 10, 1e-15);
  EXPECT_NEAR(agg.r_da, sums[2] / 10, 1e-15);
  EXPECT_NEAR(agg.r_mi, sums[3] / 10, 1e-15);
}
