// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "selo/log.hpp"
#include "selo/map_io.hpp"
#include "selo/report.hpp"

namespace {

struct Options {
  std::string manifest;
  std::string scorer = "seeded-random";
  std::vector<int> scales{256, 512, 768};
  std::vector<double> offsets{0.0, 0.5};
  std::string median_kernel = "auto";
  std::string params_file;
  std::string out;
  std::uint64_t seed = 0;
  int workers = 1;
  bool render = false;
  bool ablation = false;

  std::string payload = "coords";
  int batch = 64;
  int timeout_ms = 30000;
  std::vector<std::string> scorer_env;

  std::string maps;
  std::string map;
  std::string image;
  std::string case_id;
  std::string output;

  std::optional<double> alpha, eps, expansion, beta, eta, rho;
  std::optional<int> nms_window;
  std::vector<double> weights;
};

void add_pipeline_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "Annotation manifest (JSON)")->required();
  cmd->add_option("--scorer", o.scorer,
                  "constant:<v> | seeded-random[:<seed>] | gt-oracle | gaussian-target[:sigma=..,x=..,y=..] | "
                  "external:<command>")
      ->capture_default_str();
  cmd->add_option("--scales", o.scales, "Tile sides in pixels")->delimiter(',')->capture_default_str();
  cmd->add_option("--offsets", o.offsets, "Grid offsets as fractions of the tile side")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--median-kernel", o.median_kernel, "Odd kernel size or 'auto'")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--seed", o.seed, "Seed for seeded-random scorers")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Cases processed concurrently")->capture_default_str();
  cmd->add_flag("--render", o.render, "Also write <case>.overlay.png");
  cmd->add_option("--payload", o.payload, "External scorer tile payload: coords | png_b64")->capture_default_str();
  cmd->add_option("--batch", o.batch, "External scorer requests in flight")->capture_default_str();
  cmd->add_option("--timeout-ms", o.timeout_ms, "External scorer reply timeout")->capture_default_str();
  cmd->add_option("--scorer-env", o.scorer_env, "KEY=VALUE set in the external scorer's environment");
}

void add_metric_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--params", o.params_file, "Metric parameter file (JSON)");
  cmd->add_option("--alpha", o.alpha);
  cmd->add_option("--eps", o.eps);
  cmd->add_option("--expansion", o.expansion);
  cmd->add_option("--beta", o.beta);
  cmd->add_option("--eta", o.eta);
  cmd->add_option("--rho", o.rho);
  cmd->add_option("--nms-window", o.nms_window);
  cmd->add_option("--weights", o.weights, "w_su,w_as,w_da")->delimiter(',')->expected(3);
}

selo::MetricParams metric_params(const Options& o) {
  selo::MetricParams p = o.params_file.empty() ? selo::MetricParams{} : selo::load_params(o.params_file);
  if (o.alpha) p.alpha = *o.alpha;
  if (o.eps) p.eps = *o.eps;
  if (o.expansion) p.expansion = *o.expansion;
  if (o.beta) p.beta = *o.beta;
  if (o.eta) p.eta = *o.eta;
  if (o.rho) p.rho = *o.rho;
  if (o.nms_window) p.nms_window = *o.nms_window;
  if (!o.weights.empty()) {
    p.w_su = o.weights[0];
    p.w_as = o.weights[1];
    p.w_da = o.weights[2];
  }
  p.validate();
  return p;
}

selo::RunConfig run_config(const Options& o) {
  selo::RunConfig c;
  c.manifest = o.manifest;
  c.scorer = selo::ScorerSpec::parse(o.scorer, o.seed);
  if (o.payload == "png_b64") {
    c.scorer.payload = selo::TilePayload::PngBase64;
  } else if (o.payload != "coords") {
    throw selo::Error(selo::Errc::InvalidArgument, "unknown payload '" + o.payload + "'");
  }
  c.scorer.batch = o.batch;
  c.scorer.timeout = std::chrono::milliseconds(o.timeout_ms);
  for (const auto& kv : o.scorer_env) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw selo::Error(selo::Errc::InvalidArgument, "expected KEY=VALUE, got " + kv);
    c.scorer.env[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  c.pipeline.scales = o.scales;
  c.pipeline.offsets = o.offsets;
  if (o.median_kernel != "auto") {
    try {
      c.pipeline.median_kernel = std::stoi(o.median_kernel);
    } catch (const std::exception&) {
      throw selo::Error(selo::Errc::InvalidArgument, "median kernel must be an odd integer or 'auto'");
    }
  }
  c.params = metric_params(o);
  c.out_dir = o.out;
  c.render = o.render;
  c.seed = o.seed;
  c.workers = o.workers;
  c.validate();
  return c;
}

int summarize(const std::vector<selo::CaseResult>& cases) {
  std::size_t failed = 0;
  for (const auto& c : cases) failed += c.error ? 1 : 0;
  std::cout << cases.size() - failed << "/" << cases.size() << " cases ok\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  selo::init_logging();
  CLI::App app{"Semantic localization maps and their evaluation"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Build one probability map per case");
  add_pipeline_flags(generate, o);

  auto* evaluate = app.add_subcommand("evaluate", "Score existing maps against the manifest");
  evaluate->add_option("--manifest", o.manifest)->required();
  evaluate->add_option("--maps", o.maps, "Directory holding <case>.npy or <case>.png")->required();
  evaluate->add_option("--out", o.out, "Directory for report.json and report.csv")->required();
  evaluate->add_option("--workers", o.workers)->capture_default_str();
  add_metric_flags(evaluate, o);

  auto* run = app.add_subcommand("run", "generate + evaluate");
  add_pipeline_flags(run, o);
  add_metric_flags(run, o);
  run->add_flag("--ablation", o.ablation, "Replay the six scale sets s1..s6 as sub-runs");

  auto* render = app.add_subcommand("render", "Overlay a map on its image");
  render->add_option("--map", o.map)->required();
  render->add_option("--image", o.image)->required();
  render->add_option("--manifest", o.manifest, "Manifest holding the case to outline");
  render->add_option("--case", o.case_id, "Case whose regions are outlined");
  render->add_option("--output", o.output)->required();

  auto* stats = app.add_subcommand("stats", "Dataset statistics of a manifest");
  stats->add_option("--manifest", o.manifest)->required();
  stats->add_option("--out", o.output, "Write the table to this JSON file as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; any usage error is fatal.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) return summarize(selo::cmd_generate(run_config(o)));
    if (*evaluate) {
      const auto report = selo::cmd_evaluate(o.maps, o.manifest, metric_params(o), o.out, o.workers);
      return summarize(report.cases);
    }
    if (*run) {
      const selo::RunConfig config = run_config(o);
      if (o.ablation) {
        int code = 0;
        for (const auto& row : selo::cmd_ablation(config)) {
          std::cout << row.name << ": ";
          code = std::max(code, summarize(row.report.cases));
        }
        return code;
      }
      const auto report = selo::cmd_run(config);
      if (report.aggregate) {
        std::cout << "R_su " << report.aggregate->r_su << "  R_da " << report.aggregate->r_da << "  R_as "
                  << report.aggregate->r_as << "  R_mi " << report.aggregate->r_mi << '\n';
      }
      return summarize(report.cases);
    }
    if (*render) {
      std::vector<selo::Polygon> regions;
      if (!o.case_id.empty()) {
        if (o.manifest.empty()) throw selo::Error(selo::Errc::InvalidArgument, "--case needs --manifest");
        const auto manifest = selo::load_manifest(o.manifest);
        bool found = false;
        for (const auto& img : manifest.images) {
          for (const auto& tc : img.cases) {
            if (tc.id == o.case_id) {
              regions = tc.regions;
              found = true;
            }
          }
        }
        if (!found) throw selo::Error(selo::Errc::InvalidArgument, "no case '" + o.case_id + "' in the manifest");
      }
      selo::cmd_render(o.map, o.image, regions, o.output);
      return 0;
    }
    if (*stats) {
      const auto table = selo::cmd_stats(o.manifest);
      if (!o.output.empty()) selo::write_json(o.output, table);
      std::cout << table.dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 2;
}
