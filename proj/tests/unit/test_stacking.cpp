// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "selo/pipeline.hpp"

using namespace selo;

namespace {

std::vector<Tile> random_tiles(std::mt19937_64& rng, int n, int h, int w) {
  std::vector<Tile> tiles{{0, 0, std::min(h, w), 0, 0}};
  tiles.push_back({w - std::min(h, w), h - std::min(h, w), std::min(h, w), 0, 0});
  std::uniform_int_distribution<int> side(1, std::min(h, w));
  while (static_cast<int>(tiles.size()) < n) {
    const int s = side(rng);
    std::uniform_int_distribution<int> x(0, w - s);
    std::uniform_int_distribution<int> y(0, h - s);
    tiles.push_back({x(rng), y(rng), s, 0, 0});
  }
  return tiles;
}

}  // namespace

TEST(Stack, SingleTile) {
  const auto map = stack_similarities({{0, 0, 16, 0, 0}}, {0.7}, 16, 16);
  for (float v : map.values()) EXPECT_EQ(v, 0.7f);
}

TEST(Stack, TwoOverlappingTiles) {
  const auto map = stack_similarities({{0, 0, 8, 0, 0}, {4, 0, 8, 0, 0}}, {0.2, 0.6}, 8, 12);
  EXPECT_FLOAT_EQ(map(3, 2), 0.2f);
  EXPECT_FLOAT_EQ(map(3, 6), 0.4f);
  EXPECT_FLOAT_EQ(map(3, 10), 0.6f);
}

TEST(Stack, NegativeScoresClampToZero) {
  const auto map = stack_similarities({{0, 0, 4, 0, 0}, {0, 0, 4, 0, 0}}, {-0.8, 0.6}, 4, 4);
  for (float v : map.values()) EXPECT_FLOAT_EQ(v, 0.3f);
  const auto zero = stack_similarities({{0, 0, 4, 0, 0}}, {-0.5}, 4, 4);
  for (float v : zero.values()) EXPECT_FALSE(std::signbit(v));
}

TEST(Stack, Errors) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  EXPECT_EQ(code([] { stack_similarities({{0, 0, 4, 0, 0}}, {0.1, 0.2}, 4, 4); }), Errc::LengthMismatch);
  EXPECT_EQ(code([] { stack_similarities({{0, 0, 4, 0, 0}}, {0.1}, 4, 5); }), Errc::UncoveredPixel);
  EXPECT_THROW(stack_similarities({{0, 0, 4, 0, 0}}, {NAN}, 4, 4), Error);
  EXPECT_THROW(stack_similarities({{2, 0, 4, 0, 0}}, {0.1}, 4, 4), Error);
}

TEST(Stack, MatchesPerPixelOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> score(-0.2, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tiles = random_tiles(rng, 20, 64, 64);
    std::vector<double> scores;
    for (std::size_t i = 0; i < tiles.size(); ++i) scores.push_back(score(rng));
    EXPECT_EQ(stack_similarities(tiles, scores, 64, 64), oracle::stack(tiles, scores, 64, 64));
  }
}

TEST(Stack, PermutationInvariantForDyadicScores) {
  // Multiples of 2^-10 add exactly in float, so order cannot matter.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> q(0, 1024);
  const auto tiles = random_tiles(rng, 40, 48, 64);
  std::vector<double> scores;
  for (std::size_t i = 0; i < tiles.size(); ++i) scores.push_back(q(rng) / 1024.0);
  const auto reference = stack_similarities(tiles, scores, 48, 64);
  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Tile> t2;
    std::vector<double> s2;
    for (auto i : order) {
      t2.push_back(tiles[i]);
      s2.push_back(scores[i]);
    }
    EXPECT_EQ(stack_similarities(t2, s2, 48, 64), reference);
  }
}

TEST(Stack, ValuesWithinScoreBounds) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> score(-1.0, 2.0);
  const auto tiles = random_tiles(rng, 30, 40, 40);
  std::vector<double> scores;
  for (std::size_t i = 0; i < tiles.size(); ++i) scores.push_back(score(rng));
  double lo = 1e9;
  double hi = -1e9;
  for (double s : scores) {
    lo = std::min(lo, std::max(s, 0.0));
    hi = std::max(hi, std::max(s, 0.0));
  }
  const auto map = stack_similarities(tiles, scores, 40, 40);
  for (float v : map.values()) {
    EXPECT_GE(v, static_cast<float>(lo) * (1 - 1e-6f));
    EXPECT_LE(v, static_cast<float>(hi) * (1 + 1e-6f));
  }
}
