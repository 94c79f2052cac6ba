// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "selo/scorer.hpp"

namespace selo {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, "bad " + what + " '" + text + "' in scorer spec");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void ScorerSpec::validate() const {
  switch (kind) {
    case ScorerKind::Constant:
      if (!std::isfinite(constant)) throw Error(Errc::InvalidArgument, "constant score must be finite");
      break;
    case ScorerKind::SeededRandom:
    case ScorerKind::GtOracle: break;
    case ScorerKind::GaussianTarget:
      if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::InvalidArgument, "sigma must be > 0");
      break;
    case ScorerKind::External:
      if (command.empty()) throw Error(Errc::InvalidArgument, "external scorer needs a command");
      if (batch < 1) throw Error(Errc::InvalidArgument, "external batch size must be >= 1");
      if (timeout.count() <= 0) throw Error(Errc::InvalidArgument, "external timeout must be > 0");
      break;
  }
}

ScorerSpec ScorerSpec::parse(const std::string& text, std::uint64_t default_seed) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  ScorerSpec spec;
  if (head == "constant") {
    spec.kind = ScorerKind::Constant;
    if (tail.empty()) throw Error(Errc::InvalidArgument, "constant scorer needs a value, e.g. constant:0.5");
    spec.constant = parse_number(tail, "constant");
  } else if (head == "seeded-random" || head == "random") {
    spec.kind = ScorerKind::SeededRandom;
    spec.seed = tail.empty() ? default_seed : static_cast<std::uint64_t>(std::stoull(tail));
  } else if (head == "gt-oracle") {
    spec.kind = ScorerKind::GtOracle;
  } else if (head == "gaussian-target" || head == "gaussian") {
    spec.kind = ScorerKind::GaussianTarget;
    double x = 0.0;
    bool have_x = false;
    for (const auto& kv : split(tail, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(Errc::InvalidArgument, "expected key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const double v = parse_number(kv.substr(eq + 1), key);
      if (key == "sigma") {
        spec.sigma = v;
      } else if (key == "x") {
        x = v;
        have_x = true;
      } else if (key == "y") {
        if (!have_x) throw Error(Errc::InvalidArgument, "gaussian-target: y given before x");
        spec.targets.push_back({x, v});
        have_x = false;
      } else {
        throw Error(Errc::InvalidArgument, "unknown gaussian-target option '" + key + "'");
      }
    }
    if (have_x) throw Error(Errc::InvalidArgument, "gaussian-target: x without y");
  } else if (head == "external") {
    spec.kind = ScorerKind::External;
    spec.command = split(tail, ' ');
  } else {
    throw Error(Errc::InvalidArgument, "unknown scorer '" + head + "'");
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const ScorerSpec& spec) {
  nlohmann::json j;
  switch (spec.kind) {
    case ScorerKind::Constant: j = {{"kind", "constant"}, {"value", spec.constant}}; break;
    case ScorerKind::SeededRandom: j = {{"kind", "seeded-random"}, {"seed", spec.seed}}; break;
    case ScorerKind::GtOracle: j = {{"kind", "gt-oracle"}}; break;
    case ScorerKind::GaussianTarget: {
      nlohmann::json targets = nlohmann::json::array();
      for (const auto& p : spec.targets) targets.push_back({p.x, p.y});
      j = {{"kind", "gaussian-target"}, {"sigma", spec.sigma}, {"targets", targets}};
      break;
    }
    case ScorerKind::External:
      j = {{"kind", "external"},
           {"command", spec.command},
           {"payload", spec.payload == TilePayload::PngBase64 ? "png_b64" : "coords"},
           {"batch", spec.batch},
           {"timeout_ms", spec.timeout.count()}};
      break;
  }
  return j;
}

}  // namespace selo
