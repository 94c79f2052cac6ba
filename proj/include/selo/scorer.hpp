// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selo/annotations.hpp"
#include "selo/pipeline.hpp"

namespace selo {

/// Maps (query, tile) pairs to similarity scores. Output range is any finite
/// real; the pipeline clamps negatives.
class Scorer {
 public:
  virtual ~Scorer() = default;

  [[nodiscard]] virtual std::string name() const = 0;

  /// Whether score() may be called from several threads at once.
  [[nodiscard]] virtual bool concurrent() const = 0;

  virtual std::vector<double> score(const std::string& query, std::span<const Tile> tiles,
                                    const RasterRef& image) = 0;
};

enum class ScorerKind { Constant, SeededRandom, GtOracle, GaussianTarget, External };

enum class TilePayload { Coordinates, PngBase64 };

struct ScorerSpec {
  ScorerKind kind = ScorerKind::Constant;
  double constant = 0.0;
  std::uint64_t seed = 0;
  double sigma = 128.0;
  std::vector<Point> targets;  // gaussian-target; empty = aim at the case's GT centers
  std::vector<std::string> command;
  std::map<std::string, std::string> env;
  TilePayload payload = TilePayload::Coordinates;
  int batch = 64;
  std::chrono::milliseconds timeout{30000};

  void validate() const;

  /// Textual form used on the command line:
  ///   constant:<v> | seeded-random[:<seed>] | gt-oracle |
  ///   gaussian-target[:sigma=<s>[,x=<x>,y=<y>]...] | external:<command line>
  static ScorerSpec parse(const std::string& text, std::uint64_t default_seed = 0);
};

nlohmann::json to_json(const ScorerSpec& spec);

std::unique_ptr<Scorer> make_constant_scorer(double value);

/// Uniform [0, 1) score from a stable hash of (seed, query, x0, y0, side), so
/// the result does not depend on tile order or threading.
std::unique_ptr<Scorer> make_seeded_random_scorer(std::uint64_t seed);

/// |tile ∩ GT| / |tile|.
std::unique_ptr<Scorer> make_gt_oracle_scorer(const Mask& gt);

/// max over targets of exp(-d^2 / (2 sigma^2)), d = distance from the tile center.
std::unique_ptr<Scorer> make_gaussian_target_scorer(std::vector<Point> targets, double sigma);

/// Ground truth available to scorers that need it (gt-oracle, gaussian-target
/// without explicit targets).
struct ScorerCaseContext {
  const TestCase* test_case = nullptr;
  int height = 0;
  int width = 0;
};

/// Builds an in-process scorer, or spawns an external one.
std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec, const ScorerCaseContext& context);

/// Scores every tile, splitting the work over `workers` threads when the
/// scorer allows it. Checks that one finite value comes back per tile.
std::vector<double> score_tiles(Scorer& scorer, const std::string& query, std::span<const Tile> tiles,
                                const RasterRef& image, int workers = 1);

/// Handshake advertised by an external scorer on its first line.
struct Handshake {
  int proto = 0;
  std::string name;
  bool concurrent = false;
};

struct ExternalOptions {
  TilePayload payload = TilePayload::Coordinates;
  int batch = 64;
  std::chrono::milliseconds timeout{30000};
};

/// Child process speaking newline-delimited JSON on stdio. Requests are
/// pipelined up to `batch` in flight and responses are matched by id, so they
/// may arrive in any order. Destruction closes the child's stdin and reaps it.
class ExternalScorer final : public Scorer {
 public:
  ExternalScorer(const std::vector<std::string>& command, const std::map<std::string, std::string>& env,
                 ExternalOptions options);
  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  [[nodiscard]] std::string name() const override { return handshake_.name; }
  [[nodiscard]] bool concurrent() const override { return false; }
  [[nodiscard]] const Handshake& handshake() const noexcept { return handshake_; }

  std::vector<double> score(const std::string& query, std::span<const Tile> tiles,
                            const RasterRef& image) override;

  /// Sends one raw line and returns the next raw line from the child. Used to
  /// probe error handling; does not participate in id matching.
  std::string exchange_raw(const std::string& line);

 private:
  void write_line(const std::string& line);
  std::string read_line();
  void shutdown() noexcept;

  ExternalOptions options_;
  Handshake handshake_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::int64_t next_id_ = 1;
  bool broken_ = false;

  struct CachedImage;
  std::shared_ptr<CachedImage> image_;
};

std::unique_ptr<ExternalScorer> spawn_external_scorer(const std::vector<std::string>& command,
                                                      const std::map<std::string, std::string>& env = {},
                                                      ExternalOptions options = {});

}  // namespace selo
