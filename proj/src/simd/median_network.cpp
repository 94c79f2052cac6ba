// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "selo/error.hpp"
#include "selo/simd/kernels.hpp"

namespace selo::simd {

namespace {

std::vector<std::pair<int, int>> batcher_comparators(int n) {
  std::vector<std::pair<int, int>> out;
  for (int p = 1; p < n; p <<= 1) {
    for (int k = p; k >= 1; k >>= 1) {
      for (int j = k % p; j + k < n; j += 2 * k) {
        for (int i = 0; i < std::min(k, n - j - k); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) out.emplace_back(i + j, i + j + k);
        }
      }
    }
  }
  return out;
}

MedianNetwork build(int inputs) {
  int n = 1;
  while (n < inputs) n <<= 1;

  // Positions >= inputs hold +inf. Comparators touching them are resolved
  // statically by relabelling which register sits at which position.
  std::vector<int> slot(static_cast<std::size_t>(n));
  std::vector<bool> inf(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    slot[i] = i;
    inf[i] = i >= inputs;
  }
  std::vector<std::pair<int, int>> live_ops;  // (lo register, hi register)
  for (auto [a, b] : batcher_comparators(n)) {
    if (inf[a] && inf[b]) continue;
    if (inf[b]) continue;
    if (inf[a]) {
      std::swap(slot[a], slot[b]);
      std::swap(inf[a], inf[b]);
      continue;
    }
    live_ops.emplace_back(slot[a], slot[b]);
  }

  MedianNetwork net;
  net.inputs = inputs;
  net.result = slot[inputs / 2];

  // Backward liveness: keep only what feeds the median register.
  std::vector<bool> live(static_cast<std::size_t>(n), false);
  live[net.result] = true;
  std::vector<MedianNetwork::Op> reversed;
  for (auto it = live_ops.rbegin(); it != live_ops.rend(); ++it) {
    const auto [lo, hi] = *it;
    if (!live[lo] && !live[hi]) continue;
    MedianNetwork::Kind kind = MedianNetwork::Kind::Both;
    if (!live[hi]) kind = MedianNetwork::Kind::MinOnly;
    else if (!live[lo]) kind = MedianNetwork::Kind::MaxOnly;
    reversed.push_back({static_cast<std::uint16_t>(lo), static_cast<std::uint16_t>(hi), kind});
    live[lo] = true;
    live[hi] = true;
  }
  net.ops.assign(reversed.rbegin(), reversed.rend());
  return net;
}

}  // namespace

const MedianNetwork& median_network(int n) {
  if (n <= 0 || n % 2 == 0 || n > 4095) {
    throw Error(Errc::InvalidArgument, "median network needs an odd input count");
  }
  static std::mutex mu;
  static std::map<int, MedianNetwork> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

}  // namespace selo::simd
