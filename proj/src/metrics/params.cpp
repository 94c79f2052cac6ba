// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>

#include "selo/metrics.hpp"

namespace selo {

void MetricParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidArgument, std::string(name) + " must be > 0");
  };
  positive(alpha, "alpha");
  positive(beta, "beta");
  positive(eta, "eta");
  positive(expansion, "expansion");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(Errc::InvalidArgument, "eps must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(Errc::InvalidArgument, "rho must lie in [0, 1]");
  if (nms_window < 1 || nms_window % 2 == 0) throw Error(Errc::InvalidArgument, "nms_window must be odd and >= 1");
  for (double w : {w_su, w_as, w_da}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidArgument, "weights must be >= 0");
  }
  if (std::abs(w_su + w_as + w_da - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "weights must sum to 1");
}

void apply_params_json(MetricParams& params, const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::SchemaViolation, "metric parameters must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw Error(Errc::SchemaViolation, "parameter '" + key + "' must be a number");
      return value.get<double>();
    };
    if (key == "alpha") {
      params.alpha = number();
    } else if (key == "eps") {
      params.eps = number();
    } else if (key == "expansion") {
      params.expansion = number();
    } else if (key == "beta") {
      params.beta = number();
    } else if (key == "eta") {
      params.eta = number();
    } else if (key == "rho") {
      params.rho = number();
    } else if (key == "nms_window") {
      if (!value.is_number_integer()) throw Error(Errc::SchemaViolation, "nms_window must be an integer");
      params.nms_window = value.get<int>();
    } else if (key == "weights") {
      if (!value.is_array() || value.size() != 3) {
        throw Error(Errc::SchemaViolation, "weights must be an array [w_su, w_as, w_da]");
      }
      for (const auto& w : value) {
        if (!w.is_number()) throw Error(Errc::SchemaViolation, "weights must be numbers");
      }
      params.w_su = value[0].get<double>();
      params.w_as = value[1].get<double>();
      params.w_da = value[2].get<double>();
    } else {
      throw Error(Errc::SchemaViolation, "unknown metric parameter '" + key + "'");
    }
  }
  params.validate();
}

MetricParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileMissing, "cannot open parameter file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaViolation, path.string() + ": " + e.what());
  }
  MetricParams params;
  apply_params_json(params, doc);
  return params;
}

nlohmann::json to_json(const MetricParams& p) {
  return {{"alpha", p.alpha}, {"eps", p.eps},   {"expansion", p.expansion},
          {"beta", p.beta},   {"eta", p.eta},   {"rho", p.rho},
          {"nms_window", p.nms_window},         {"weights", {p.w_su, p.w_as, p.w_da}}};
}

}  // namespace selo
