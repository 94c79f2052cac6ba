// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selo {

enum class Errc {
  InvalidArgument,
  FileMissing,
  Io,
  SchemaViolation,
  PolygonDegenerate,
  VertexOutOfBounds,
  EmptyMask,
  NoApplicableScale,
  UncoveredPixel,
  LengthMismatch,
  CountOverflow,
  EvenKernel,
  ScorerUnavailable,
  ScorerFailed,
  ProtocolError,
  Timeout,
  SpawnFailure,
  HandshakeMismatch,
  EmptyGt,
  EmptyList,
  MissingMap,
  DimMismatch,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's per-case error table) can branch on the kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace selo
