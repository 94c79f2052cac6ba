// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles/oracles.hpp"
#include "selo/annotations.hpp"
#include "selo/image_io.hpp"
#include "selo/log.hpp"
#include "selo/map_io.hpp"
#include "selo/metrics.hpp"
#include "selo/pipeline.hpp"
#include "selo/report.hpp"
#include "test_support.hpp"

using namespace selo;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// A check fills `detail` and returns pass/fail.
using Check = std::function<bool(std::ostringstream& detail)>;

Polygon box(double x0, double y0, double x1, double y1) { return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}); }

bool uniform_calibration(std::ostringstream& d) {
  const double target = 1.0 - std::exp(-0.694);
  const MetricParams p;
  const auto t0 = Clock::now();

  const ProbabilityMap a(512, 512, 0.37f);
  const double r1 = compute_rsu(a, {rasterize_region(box(200, 120, 264, 184), 512, 512)}, p);

  const ProbabilityMap b(1500, 2000, 0.81f);
  const Polygon irregular({{310.5, 220.25}, {905, 180}, {1180.75, 640}, {860, 1010.5}, {620, 760}, {402, 1120}});
  const double r2 = compute_rsu(b, {rasterize_region(irregular, 1500, 2000)}, p);

  const double elapsed = seconds_since(t0);
  d << "box " << r1 << ", polygon " << r2 << ", target " << target << ", " << elapsed << " s";
  return std::abs(r1 - target) <= 1e-3 && std::abs(r2 - target) <= 1e-3 && elapsed < 1.0;
}

bool reference_rows(std::ostringstream& d) {
  struct Row {
    const char* name;
    double su, da, as, mi;
  };
  // Reference (R_su, R_da, R_as) triples and their R_mi.
  const Row rows[] = {
      {"Sydney", 0.5844, 0.5670, 0.5026, 0.5496}, {"UCM", 0.5821, 0.4715, 0.5277, 0.5160},
      {"RSITMD", 0.6920, 0.6667, 0.3323, 0.6772}, {"RSICD", 0.6661, 0.5773, 0.3875, 0.6251},
      {"s1", 0.6389, 0.6488, 0.2878, 0.6670},     {"s2", 0.6839, 0.6030, 0.3326, 0.6579},
      {"s3", 0.6897, 0.6371, 0.3933, 0.6475},     {"s4", 0.6682, 0.7072, 0.2694, 0.6998},
      {"s5", 0.6920, 0.6667, 0.3323, 0.6772},     {"s6", 0.6809, 0.6884, 0.3025, 0.6886},
      {"VSE++", 0.6364, 0.5829, 0.4166, 0.6045},  {"LW-MCR", 0.6698, 0.6021, 0.4335, 0.6167},
      {"SCAN", 0.6421, 0.6132, 0.3871, 0.6247},   {"CAMP", 0.6819, 0.6314, 0.3912, 0.6437},
      {"AMFMN", 0.6920, 0.6667, 0.3323, 0.6772},
  };
  const auto t0 = Clock::now();
  const MetricParams p;
  double worst = 0.0;
  const char* worst_name = "";
  for (const auto& r : rows) {
    const double diff = std::abs(compute_rmi(r.su, r.as, r.da, p) - r.mi);
    if (diff > worst) {
      worst = diff;
      worst_name = r.name;
    }
  }
  const double elapsed = seconds_since(t0);
  d << "15 rows, worst |diff| " << worst << " (" << worst_name << "), " << elapsed << " s";
  return worst <= 5e-4 && elapsed < 1.0;
}

bool branch_extremes(std::ostringstream& d) {
  const MetricParams p;
  const auto ctx = make_region_context(box(40, 30, 100, 90), 128, 128, p.expansion);
  const AttentionPoint at_center{ctx.center.x, ctx.center.y, 0.9};
  const std::vector<GtRegionContext> contexts{ctx};

  const double ras1 = compute_ras({{at_center}}, contexts, p);
  const double rda1 = compute_rda({{at_center}}, contexts, p);
  const double ras0 = compute_ras({{}}, contexts, p);
  const double rda0 = compute_rda({{}}, contexts, p);
  const double rda2 = compute_rda({{at_center, at_center}}, contexts, p);
  const double want2 = (1.0 + std::exp(-2.0)) / 2.0;

  d << "single R_as " << ras1 << " R_da " << rda1 << "; empty R_as " << ras0 << " R_da " << rda0
    << "; coincident R_da " << rda2;
  return ras1 == 0.0 && rda1 == 1.0 && ras0 == 1.0 && rda0 == 0.0 && std::abs(rda2 - want2) <= 1e-9;
}

bool median_equivalence(std::ostringstream& d) {
  std::mt19937_64 rng(11);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_map(rng, 64, 64, trial % 4 == 0 ? 5 : 0);
    for (int k : {3, 5}) mismatches += median_filter(m, k) == oracle::median(m, k) ? 0 : 1;
  }
  d << "400 filtered maps, " << mismatches << " mismatches";
  return mismatches == 0;
}

bool maxima_equivalence(std::ostringstream& d) {
  std::mt19937_64 rng(12);
  int mismatches = 0;
  std::size_t points = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // Every other map is quantized so that plateaus actually occur.
    const auto m = oracle::random_map(rng, 32, 32, trial % 2 == 0 ? 3 : 0);
    const auto got = find_local_maxima(m, 3);
    points += got.size();
    mismatches += got == oracle::local_maxima(m, 3) ? 0 : 1;
  }
  d << "200 maps, " << points << " maxima, " << mismatches << " mismatches";
  return mismatches == 0;
}

bool stacking_equivalence(std::ostringstream& d) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> pos(0, 63);
  std::uniform_int_distribution<int> side(1, 64);
  std::uniform_int_distribution<int> count(1, 40);
  std::uniform_real_distribution<double> score(-0.5, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Tile> tiles{{0, 0, 64, 0, 0}};
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const int s = side(rng);
      const int x0 = std::min(pos(rng), 64 - s);
      const int y0 = std::min(pos(rng), 64 - s);
      tiles.push_back({x0, y0, s, 0, 0});
    }
    std::shuffle(tiles.begin(), tiles.end(), rng);
    std::vector<double> scores(tiles.size());
    for (auto& s : scores) s = score(rng);
    mismatches += stack_similarities(tiles, scores, 64, 64) == oracle::stack(tiles, scores, 64, 64) ? 0 : 1;
  }

  // Offset 0 alone must cover every pixel once per applicable scale.
  std::uniform_int_distribution<int> dim(40, 400);
  int thin = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int h = dim(rng);
    const int w = dim(rng);
    PipelineConfig c;
    c.scales = {32, 48, 100, 256, 512};
    c.offsets = {0.0};
    const int applicable = static_cast<int>(std::count_if(c.scales.begin(), c.scales.end(),
                                                          [&](int s) { return s <= std::min(h, w); }));
    const auto cov = coverage_count(plan_tiles(h, w, c), h, w);
    for (auto v : cov.values()) thin += v < applicable ? 1 : 0;
  }
  d << "100 tile sets, " << mismatches << " mismatches; " << thin << " under-covered pixels";
  return mismatches == 0 && thin == 0;
}

/// Ten synthetic 512x512 cases, mostly one region, a few with two. Regions
/// sit at least 96 px from the border: the strip that only offset-0 tiles reach
/// is averaged over fewer tiles and can carry its own maxima.
json synthetic_manifest(const test::TempDir& dir) {
  RgbImage img{512, 512, std::vector<std::uint8_t>(512 * 512 * 3, 90)};
  write_rgb_png(dir / "scene.png", img);
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> extent(50, 110);
  json cases = json::array();
  for (int i = 0; i < 10; ++i) {
    json regions = json::array();
    const int w = extent(rng);
    const int h = extent(rng);
    const bool pair = i % 4 == 3;
    // Pairs are split into opposite quadrants.
    std::uniform_int_distribution<int> corner(96, pair ? 200 - std::max(w, h) / 2 : 416 - std::max(w, h));
    const int x0 = corner(rng);
    const int y0 = corner(rng);
    regions.push_back({{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}});
    if (pair) regions.push_back({{300, 310}, {370, 315}, {364, 382}, {296, 376}});
    cases.push_back({{"id", "syn-" + std::to_string(i)}, {"query", "synthetic target"}, {"regions", regions}});
  }
  return {{"version", 1}, {"images", {{{"file", "scene.png"}, {"height", 512}, {"width", 512}, {"cases", cases}}}}};
}

bool discriminativeness(std::ostringstream& d) {
  test::TempDir dir;
  test::spit(dir / "syn.json", synthetic_manifest(dir).dump());
  RunConfig c;
  c.manifest = dir / "syn.json";
  c.pipeline.scales = {32, 64, 128};
  c.seed = 7;

  c.scorer = ScorerSpec::parse("gt-oracle");
  c.out_dir = dir / "oracle";
  const auto oracle_run = cmd_run(c);
  c.scorer = ScorerSpec::parse("seeded-random", c.seed);
  c.out_dir = dir / "random";
  const auto random_run = cmd_run(c);
  c.scorer = ScorerSpec::parse("gaussian-target:sigma=24");
  c.out_dir = dir / "gauss";
  const auto gauss_run = cmd_run(c);

  if (!oracle_run.ok() || !random_run.ok() || !gauss_run.ok()) {
    d << "a run reported case errors";
    return false;
  }
  const double gap = oracle_run.aggregate->r_mi - random_run.aggregate->r_mi;
  d << "R_mi gt-oracle " << oracle_run.aggregate->r_mi << " vs seeded-random " << random_run.aggregate->r_mi
    << " (gap " << gap << "); gaussian R_as " << gauss_run.aggregate->r_as << " R_da " << gauss_run.aggregate->r_da;
  return gap >= 0.15 && gauss_run.aggregate->r_as <= 0.10 && gauss_run.aggregate->r_da >= 0.9;
}

json strip_timings(json report) {
  for (auto& c : report["cases"]) c.erase("timings");
  return report;
}

bool desk_scale(std::ostringstream& d) {
  test::TempDir dir;
  RgbImage img{2048, 2048, std::vector<std::uint8_t>(2048ULL * 2048 * 3)};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>((i * 2654435761ULL) >> 24);
  write_rgb_png(dir / "big.png", img);
  const json manifest = {
      {"version", 1},
      {"images",
       {{{"file", "big.png"},
         {"height", 2048},
         {"width", 2048},
         {"cases",
          {{{"id", "pier"}, {"query", "boats by the pier"}, {"regions", {{{200, 300}, {700, 300}, {700, 620}, {200, 620}}}}},
           {{"id", "field"},
            {"query", "green field"},
            {"regions", {{{1200, 1100}, {1800, 1180}, {1700, 1700}, {1150, 1650}}, {{300, 1500}, {600, 1500}, {450, 1800}}}}},
           {{"id", "lake"}, {"query", "a small lake"}, {"regions", {{{1400, 200}, {1650, 260}, {1600, 520}, {1380, 480}}}}}}}}}}};
  test::spit(dir / "m.json", manifest.dump());

  RunConfig c;
  c.manifest = dir / "m.json";
  c.scorer = ScorerSpec::parse(std::string("external:") + SELO_STUB_SCORER + " hash", 3);
  c.seed = 3;

  const auto t0 = Clock::now();
  c.out_dir = dir / "a";
  const auto first = cmd_run(c);
  const double elapsed = seconds_since(t0);
  c.out_dir = dir / "b";
  const auto second = cmd_run(c);

  bool timings = true;
  const json report = json::parse(test::slurp(dir / "a" / "report.json"));
  for (const auto& row : report["cases"]) {
    for (const char* k : {"cut_s", "sim_s", "gnt_s", "flt_s"}) {
      timings = timings && row.contains("timings") && row["timings"].contains(k) && row["timings"][k].get<double>() >= 0.0;
    }
  }
  const bool valid = first.ok() && report["cases"].size() == 3 && report.contains("aggregate") &&
                     report["version"] == kToolVersion;
  bool identical = strip_timings(report) == strip_timings(json::parse(test::slurp(dir / "b" / "report.json"))) &&
                   test::slurp(dir / "a" / "report.csv") == test::slurp(dir / "b" / "report.csv");
  for (const char* id : {"pier", "field", "lake"}) {
    identical = identical && test::slurp(dir / "a" / (std::string(id) + ".npy")) ==
                                 test::slurp(dir / "b" / (std::string(id) + ".npy"));
  }
  d << "first run " << elapsed << " s, " << (first.cases.empty() ? 0 : first.cases[0].tile_count)
    << " tiles per case; timings " << (timings ? "ok" : "missing") << "; report " << (valid ? "valid" : "invalid")
    << "; reruns " << (identical ? "identical" : "differ");
  return second.ok() && elapsed < 60.0 && timings && valid && identical;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<const char*, Check>> criteria = {
      {"uniform-map R_su calibration", uniform_calibration},
      {"R_mi arithmetic on reference rows", reference_rows},
      {"attention branch extremes", branch_extremes},
      {"median filter matches sort oracle", median_equivalence},
      {"local maxima match scan oracle", maxima_equivalence},
      {"stacking matches per-pixel oracle", stacking_equivalence},
      {"scorers are discriminated", discriminativeness},
      {"2048x2048 end-to-end run", desk_scale},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::ostringstream detail;
    bool pass = false;
    try {
      pass = criteria[i].second(detail);
    } catch (const std::exception& e) {
      detail << "threw: " << e.what();
    }
    failed += pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].first, detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
