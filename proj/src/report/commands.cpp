// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "selo/image_io.hpp"
#include "selo/map_io.hpp"
#include "selo/render.hpp"
#include "selo/report.hpp"

namespace selo {

namespace fs = std::filesystem;

namespace {

struct CaseRef {
  const ImageEntry* image;
  const TestCase* test_case;
};

std::vector<CaseRef> sorted_cases(const Manifest& manifest) {
  std::vector<CaseRef> out;
  for (const auto& img : manifest.images) {
    for (const auto& tc : img.cases) out.push_back({&img, &tc});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CaseRef& a, const CaseRef& b) { return a.test_case->id < b.test_case->id; });
  return out;
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Runs `body`, turning any exception into a per-case error entry.
template <typename Fn>
void isolate(CaseResult& result, Fn body) {
  try {
    body();
  } catch (const Error& e) {
    result.error = e.what();
  } catch (const std::exception& e) {
    result.error = std::string("internal: ") + e.what();
  }
  if (result.error) spdlog::error("case {}: {}", result.id, *result.error);
}

CaseResult blank_result(const CaseRef& ref) {
  CaseResult r;
  r.id = ref.test_case->id;
  r.image = ref.image->file;
  return r;
}

ProbabilityMap generate_case(const RunConfig& config, const CaseRef& ref, CaseResult& result) {
  const ImageEntry& img = *ref.image;
  std::error_code ec;
  if (!fs::is_regular_file(img.path, ec)) throw Error(Errc::FileMissing, "image not found: " + img.path.string());
  auto scorer = make_scorer(config.scorer, {ref.test_case, img.height, img.width});
  SeloResult out = generate_selo_map({img.path, img.height, img.width}, ref.test_case->query, *scorer,
                                     config.pipeline);
  result.timings = out.timings;
  result.degenerate = out.degenerate;
  result.tile_count = out.tile_count;
  result.median_kernel = out.median_kernel;

  const std::string stem = case_stem(result.id);
  write_npy(config.out_dir / (stem + ".npy"), out.map);
  write_map_png(config.out_dir / (stem + ".png"), out.map);
  nlohmann::json timing = to_json(out.timings);
  timing["case"] = result.id;
  timing["tile_count"] = out.tile_count;
  timing["median_kernel"] = out.median_kernel;
  timing["degenerate"] = out.degenerate;
  write_json(config.out_dir / (stem + ".timing.json"), timing);
  if (config.render) {
    const RgbImage source = read_rgb_image(img.path);
    write_rgb_png(config.out_dir / (stem + ".overlay.png"),
                  render_overlay(source, out.map, ref.test_case->regions));
  }
  return std::move(out.map);
}

void evaluate_into(const ProbabilityMap& map, const CaseRef& ref, const MetricParams& params, CaseResult& result) {
  if (!map.same_shape(ref.image->height, ref.image->width)) {
    throw Error(Errc::DimMismatch, "map is " + std::to_string(map.width()) + "x" + std::to_string(map.height()) +
                                       ", manifest says " + std::to_string(ref.image->width) + "x" +
                                       std::to_string(ref.image->height));
  }
  SeLoScores scores = evaluate_case(map, *ref.test_case, params);
  scores.timings = result.timings;
  result.scores = std::move(scores);
}

void write_report(const RunReport& report, const fs::path& out_dir) {
  write_json(out_dir / "report.json", report.to_json());
  std::ofstream csv(out_dir / "report.csv");
  if (!csv) throw Error(Errc::Io, "cannot write " + (out_dir / "report.csv").string());
  csv << report.to_csv();
}

std::optional<StageTimings> read_timing(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  std::ifstream in(path);
  try {
    const auto j = nlohmann::json::parse(in);
    return StageTimings{j.at("cut_s").get<double>(), j.at("sim_s").get<double>(), j.at("gnt_s").get<double>(),
                        j.at("flt_s").get<double>(), j.at("total_s").get<double>()};
  } catch (const nlohmann::json::exception&) {
    spdlog::warn("ignoring unreadable timing file {}", path.string());
    return std::nullopt;
  }
}

void prepare_out_dir(const fs::path& dir) {
  if (dir.empty()) throw Error(Errc::InvalidArgument, "an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

std::vector<CaseResult> cmd_generate(const RunConfig& config) {
  config.validate();
  const Manifest manifest = load_manifest(config.manifest);
  prepare_out_dir(config.out_dir);
  const auto refs = sorted_cases(manifest);
  std::vector<CaseResult> results;
  for (const auto& ref : refs) results.push_back(blank_result(ref));
  parallel_for(refs.size(), config.workers, [&](std::size_t i) {
    isolate(results[i], [&] { generate_case(config, refs[i], results[i]); });
  });
  return results;
}

RunReport cmd_evaluate(const fs::path& maps_dir, const fs::path& manifest_path, const MetricParams& params,
                       const fs::path& out_dir, int workers) {
  params.validate();
  std::error_code ec;
  if (!fs::is_directory(maps_dir, ec)) throw Error(Errc::MissingMap, "map directory not found: " + maps_dir.string());
  const Manifest manifest = load_manifest(manifest_path);
  const auto refs = sorted_cases(manifest);

  RunReport report;
  report.config = {{"manifest", manifest_path.string()}, {"maps", maps_dir.string()}, {"params", to_json(params)}};
  for (const auto& ref : refs) report.cases.push_back(blank_result(ref));
  parallel_for(refs.size(), workers, [&](std::size_t i) {
    CaseResult& result = report.cases[i];
    isolate(result, [&] {
      const std::string stem = case_stem(result.id);
      fs::path map_path = maps_dir / (stem + ".npy");
      std::error_code e;
      if (!fs::is_regular_file(map_path, e)) map_path = maps_dir / (stem + ".png");
      if (!fs::is_regular_file(map_path, e)) {
        throw Error(Errc::MissingMap, "no map for case '" + result.id + "' in " + maps_dir.string());
      }
      result.timings = read_timing(maps_dir / (stem + ".timing.json"));
      evaluate_into(read_map(map_path), refs[i], params, result);
    });
  });
  report.aggregate = aggregate_cases(report.cases);
  if (!out_dir.empty()) {
    prepare_out_dir(out_dir);
    write_report(report, out_dir);
  }
  return report;
}

RunReport cmd_run(const RunConfig& config) {
  config.validate();
  const Manifest manifest = load_manifest(config.manifest);
  prepare_out_dir(config.out_dir);
  const auto refs = sorted_cases(manifest);

  RunReport report;
  report.config = to_json(config);
  for (const auto& ref : refs) report.cases.push_back(blank_result(ref));
  parallel_for(refs.size(), config.workers, [&](std::size_t i) {
    isolate(report.cases[i], [&] {
      const ProbabilityMap map = generate_case(config, refs[i], report.cases[i]);
      evaluate_into(map, refs[i], config.params, report.cases[i]);
    });
  });
  report.aggregate = aggregate_cases(report.cases);
  write_report(report, config.out_dir);
  return report;
}

const std::vector<std::pair<std::string, std::vector<int>>>& ablation_scale_sets() {
  static const std::vector<std::pair<std::string, std::vector<int>>> sets{
      {"s1", {128, 256}},      {"s2", {256, 512}},           {"s3", {512, 768}},
      {"s4", {128, 256, 512}}, {"s5", {256, 512, 768}}, {"s6", {128, 256, 512, 768}},
  };
  return sets;
}

std::vector<AblationRow> cmd_ablation(const RunConfig& config) {
  config.validate();
  prepare_out_dir(config.out_dir);
  std::vector<AblationRow> rows;
  nlohmann::json summary = nlohmann::json::array();
  std::string csv = "Set,Scales,R_su,R_da,R_as,R_mi,Cut_s,Sim_s,Gnt_s,Flt_s,Total_s\n";
  for (const auto& [name, scales] : ablation_scale_sets()) {
    RunConfig sub = config;
    sub.pipeline.scales = scales;
    sub.out_dir = config.out_dir / name;
    AblationRow row{name, scales, cmd_run(sub), {}};
    for (const auto& c : row.report.cases) {
      if (!c.timings) continue;
      row.total.cut_s += c.timings->cut_s;
      row.total.sim_s += c.timings->sim_s;
      row.total.gnt_s += c.timings->gnt_s;
      row.total.flt_s += c.timings->flt_s;
      row.total.total_s += c.timings->total_s;
    }
    summary.push_back({{"set", name},
                       {"scales", scales},
                       {"aggregate", row.report.aggregate ? to_json(*row.report.aggregate) : nlohmann::json()},
                       {"failed", row.report.to_json()["failed"]},
                       {"timings", to_json(row.total)}});
    std::string scale_text;
    for (int s : scales) scale_text += (scale_text.empty() ? "" : " ") + std::to_string(s);
    char buf[256];
    if (row.report.aggregate) {
      const auto& a = *row.report.aggregate;
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f", a.r_su, a.r_da, a.r_as, a.r_mi);
    } else {
      std::snprintf(buf, sizeof buf, ",,,");
    }
    char tbuf[160];
    std::snprintf(tbuf, sizeof tbuf, ",%.4f,%.4f,%.4f,%.4f,%.4f\n", row.total.cut_s, row.total.sim_s,
                  row.total.gnt_s, row.total.flt_s, row.total.total_s);
    csv += name + "," + scale_text + "," + buf + tbuf;
    rows.push_back(std::move(row));
  }
  write_json(config.out_dir / "ablation.json", {{"config", to_json(config)}, {"sets", summary}});
  std::ofstream out(config.out_dir / "ablation.csv");
  if (!out) throw Error(Errc::Io, "cannot write ablation.csv");
  out << csv;
  return rows;
}

void cmd_render(const fs::path& map_path, const fs::path& image_path, const std::vector<Polygon>& regions,
                const fs::path& output) {
  const ProbabilityMap map = read_map(map_path);
  const RgbImage source = read_rgb_image(image_path);
  write_rgb_png(output, render_overlay(source, map, regions));
}

nlohmann::json cmd_stats(const fs::path& manifest) { return to_json(manifest_stats(load_manifest(manifest))); }

}  // namespace selo
