// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <thread>

#include "selo/scorer.hpp"

namespace selo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  std::string name() const override { return "constant"; }
  bool concurrent() const override { return true; }
  std::vector<double> score(const std::string&, std::span<const Tile> tiles, const RasterRef&) override {
    return std::vector<double>(tiles.size(), value_);
  }

 private:
  double value_;
};

class SeededRandomScorer final : public Scorer {
 public:
  explicit SeededRandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "seeded-random"; }
  bool concurrent() const override { return true; }
  std::vector<double> score(const std::string& query, std::span<const Tile> tiles, const RasterRef&) override {
    const std::uint64_t q = splitmix64(seed_ ^ fnv1a(query));
    std::vector<double> out;
    out.reserve(tiles.size());
    for (const Tile& t : tiles) {
      std::uint64_t h = splitmix64(q ^ static_cast<std::uint64_t>(t.x0));
      h = splitmix64(h ^ static_cast<std::uint64_t>(t.y0));
      h = splitmix64(h ^ static_cast<std::uint64_t>(t.side));
      out.push_back(static_cast<double>(h >> 11) * 0x1.0p-53);
    }
    return out;
  }

 private:
  std::uint64_t seed_;
};

class GtOracleScorer final : public Scorer {
 public:
  explicit GtOracleScorer(const Mask& gt) : height_(gt.height()), width_(gt.width()) {
    // Summed-area table with a zero border row/column.
    integral_.assign(static_cast<std::size_t>(height_ + 1) * (width_ + 1), 0);
    for (int r = 0; r < height_; ++r) {
      std::uint64_t run = 0;
      for (int c = 0; c < width_; ++c) {
        run += gt(r, c) ? 1 : 0;
        at(r + 1, c + 1) = at(r, c + 1) + run;
      }
    }
  }
  std::string name() const override { return "gt-oracle"; }
  bool concurrent() const override { return true; }
  std::vector<double> score(const std::string&, std::span<const Tile> tiles, const RasterRef& image) override {
    if (image.height != height_ || image.width != width_) {
      throw Error(Errc::DimMismatch, "gt-oracle mask does not match the image dimensions");
    }
    std::vector<double> out;
    out.reserve(tiles.size());
    for (const Tile& t : tiles) {
      const std::uint64_t inside = at(t.y0 + t.side, t.x0 + t.side) - at(t.y0, t.x0 + t.side) -
                                   at(t.y0 + t.side, t.x0) + at(t.y0, t.x0);
      out.push_back(static_cast<double>(inside) / (static_cast<double>(t.side) * t.side));
    }
    return out;
  }

 private:
  std::uint64_t& at(int r, int c) { return integral_[static_cast<std::size_t>(r) * (width_ + 1) + c]; }

  int height_;
  int width_;
  std::vector<std::uint64_t> integral_;
};

class GaussianTargetScorer final : public Scorer {
 public:
  GaussianTargetScorer(std::vector<Point> targets, double sigma) : targets_(std::move(targets)), sigma_(sigma) {}
  std::string name() const override { return "gaussian-target"; }
  bool concurrent() const override { return true; }
  std::vector<double> score(const std::string&, std::span<const Tile> tiles, const RasterRef&) override {
    std::vector<double> out;
    out.reserve(tiles.size());
    const double denom = 2.0 * sigma_ * sigma_;
    for (const Tile& t : tiles) {
      const double cx = t.x0 + 0.5 * t.side;
      const double cy = t.y0 + 0.5 * t.side;
      double best = 0.0;
      for (const Point& p : targets_) {
        const double d2 = (cx - p.x) * (cx - p.x) + (cy - p.y) * (cy - p.y);
        best = std::max(best, std::exp(-d2 / denom));
      }
      out.push_back(best);
    }
    return out;
  }

 private:
  std::vector<Point> targets_;
  double sigma_;
};

}  // namespace

std::unique_ptr<Scorer> make_constant_scorer(double value) {
  if (!std::isfinite(value)) throw Error(Errc::InvalidArgument, "constant score must be finite");
  return std::make_unique<ConstantScorer>(value);
}

std::unique_ptr<Scorer> make_seeded_random_scorer(std::uint64_t seed) {
  return std::make_unique<SeededRandomScorer>(seed);
}

std::unique_ptr<Scorer> make_gt_oracle_scorer(const Mask& gt) { return std::make_unique<GtOracleScorer>(gt); }

std::unique_ptr<Scorer> make_gaussian_target_scorer(std::vector<Point> targets, double sigma) {
  if (targets.empty()) throw Error(Errc::InvalidArgument, "gaussian-target needs at least one target");
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "gaussian-target sigma must be > 0");
  return std::make_unique<GaussianTargetScorer>(std::move(targets), sigma);
}

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec, const ScorerCaseContext& context) {
  spec.validate();
  auto need_case = [&](const char* what) {
    if (context.test_case == nullptr) {
      throw Error(Errc::ScorerUnavailable, std::string(what) + " scorer needs the test case ground truth");
    }
  };
  switch (spec.kind) {
    case ScorerKind::Constant: return make_constant_scorer(spec.constant);
    case ScorerKind::SeededRandom: return make_seeded_random_scorer(spec.seed);
    case ScorerKind::GtOracle:
      need_case("gt-oracle");
      return make_gt_oracle_scorer(rasterize_union(context.test_case->regions, context.height, context.width));
    case ScorerKind::GaussianTarget: {
      std::vector<Point> targets = spec.targets;
      if (targets.empty()) {
        need_case("gaussian-target");
        for (const auto& poly : context.test_case->regions) targets.push_back(region_center(poly));
      }
      return make_gaussian_target_scorer(std::move(targets), spec.sigma);
    }
    case ScorerKind::External:
      return spawn_external_scorer(spec.command, spec.env, {spec.payload, spec.batch, spec.timeout});
  }
  throw Error(Errc::ScorerUnavailable, "unknown scorer kind");
}

std::vector<double> score_tiles(Scorer& scorer, const std::string& query, std::span<const Tile> tiles,
                                const RasterRef& image, int workers) {
  std::vector<double> out;
  const std::size_t n = tiles.size();
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || !scorer.concurrent() || n < 2 * threads) {
    out = scorer.score(query, tiles, image);
  } else {
    std::vector<std::vector<double>> parts(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          parts[w] = scorer.score(query, tiles.subspan(begin, end - begin), image);
          if (parts[w].size() != end - begin) throw Error(Errc::ScorerFailed, "scorer returned a short batch");
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    out.reserve(n);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  }
  if (out.size() != n) {
    throw Error(Errc::ScorerFailed, "scorer returned " + std::to_string(out.size()) + " scores for " +
                                        std::to_string(n) + " tiles");
  }
  for (double s : out) {
    if (!std::isfinite(s)) throw Error(Errc::ScorerFailed, "scorer returned a non-finite score");
  }
  return out;
}

}  // namespace selo
