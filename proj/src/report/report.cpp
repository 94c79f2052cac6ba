// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <sstream>

#include "selo/report.hpp"

namespace selo {

void RunConfig::validate() const {
  scorer.validate();
  pipeline.validate();
  params.validate();
  if (workers < 1) throw Error(Errc::InvalidArgument, "workers must be >= 1");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(manifest, ec)) {
    throw Error(Errc::FileMissing, "manifest not found: " + manifest.string());
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json pipeline = {{"scales", c.pipeline.scales},
                             {"offsets", c.pipeline.offsets},
                             {"median_kernel", c.pipeline.median_kernel ? nlohmann::json(*c.pipeline.median_kernel)
                                                                        : nlohmann::json("auto")}};
  return {{"manifest", c.manifest.string()}, {"scorer", to_json(c.scorer)}, {"pipeline", pipeline},
          {"params", to_json(c.params)},     {"render", c.render},          {"seed", c.seed}};
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string case_stem(const std::string& id) {
  std::string out = id;
  for (char& ch : out) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '-' || ch == '_' || ch == '.';
    if (!keep) ch = '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

std::optional<AggregateScores> aggregate_cases(const std::vector<CaseResult>& cases) {
  std::vector<SeLoScores> scores;
  for (const auto& c : cases) {
    if (!c.error && c.scores) scores.push_back(*c.scores);
  }
  if (scores.empty()) return std::nullopt;
  return aggregate(scores);
}

bool RunReport::ok() const noexcept {
  for (const auto& c : cases) {
    if (c.error) return false;
  }
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& c : cases) {
    nlohmann::json row = {{"id", c.id}, {"image", c.image}};
    if (c.error) {
      ++failed;
      row["status"] = "error";
      row["error"] = *c.error;
    } else {
      row["status"] = "ok";
      if (c.scores) {
        row["scores"] = selo::to_json(*c.scores);
        row["scores"].erase("timings");  // reported once, at case level
      }
      if (c.timings) row["timings"] = selo::to_json(*c.timings);
      if (c.median_kernel > 0) {
        row["degenerate"] = c.degenerate;
        row["tile_count"] = c.tile_count;
        row["median_kernel"] = c.median_kernel;
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"tool", "selo"},
          {"version", tool_version},
          {"config", config},
          {"cases", rows},
          {"failed", failed},
          {"aggregate", aggregate ? selo::to_json(*aggregate) : nlohmann::json()}};
}

std::string RunReport::to_csv() const {
  std::ostringstream out;
  out << "Case,R_su,R_da,R_as,R_mi\n";
  auto row = [&](const std::string& name, double su, double da, double as, double mi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f\n", su, da, as, mi);
    out << csv_field(name) << buf;
  };
  for (const auto& c : cases) {
    if (c.error || !c.scores) {
      out << csv_field(c.id) << ",,,,\n";
    } else {
      row(c.id, c.scores->r_su, c.scores->r_da, c.scores->r_as, c.scores->r_mi);
    }
  }
  if (aggregate) row("mean", aggregate->r_su, aggregate->r_da, aggregate->r_as, aggregate->r_mi);
  return out.str();
}

}  // namespace selo
