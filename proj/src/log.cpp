// SPDX-License-Identifier: Apache-2.0
#include "selo/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "selo/error.hpp"
#include "selo/raster.hpp"

namespace selo {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::FileMissing: return "file-missing";
    case Errc::Io: return "io-error";
    case Errc::SchemaViolation: return "schema-violation";
    case Errc::PolygonDegenerate: return "polygon-degenerate";
    case Errc::VertexOutOfBounds: return "vertex-out-of-bounds";
    case Errc::EmptyMask: return "empty-mask";
    case Errc::NoApplicableScale: return "no-applicable-scale";
    case Errc::UncoveredPixel: return "uncovered-pixel";
    case Errc::LengthMismatch: return "length-mismatch";
    case Errc::CountOverflow: return "count-overflow";
    case Errc::EvenKernel: return "even-kernel";
    case Errc::ScorerUnavailable: return "scorer-unavailable";
    case Errc::ScorerFailed: return "scorer-failed";
    case Errc::ProtocolError: return "protocol-error";
    case Errc::Timeout: return "timeout";
    case Errc::SpawnFailure: return "spawn-failure";
    case Errc::HandshakeMismatch: return "handshake-mismatch";
    case Errc::EmptyGt: return "empty-gt";
    case Errc::EmptyList: return "empty-list";
    case Errc::MissingMap: return "missing-map";
    case Errc::DimMismatch: return "dim-mismatch";
  }
  return "unknown";
}

void check_probability_map(const ProbabilityMap& map) {
  for (float v : map.values()) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw Error(Errc::InvalidArgument, "probability map values must be finite and nonnegative");
    }
  }
}

void init_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("selo");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("SELO_LOG")) {
      level = spdlog::level::from_str(env);
    }
    spdlog::set_level(level);
    return true;
  }();
  (void)once;
}

}  // namespace selo
