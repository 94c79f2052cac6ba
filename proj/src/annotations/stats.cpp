// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "selo/annotations.hpp"

namespace selo {

ManifestStats manifest_stats(const Manifest& manifest) {
  ManifestStats s;
  s.image_number = manifest.images.size();
  std::set<std::string> vocabulary;
  double words = 0.0;
  double regions = 0.0;
  double ratio = 0.0;
  for (const auto& img : manifest.images) {
    const double area = static_cast<double>(img.height) * static_cast<double>(img.width);
    for (const auto& tc : img.cases) {
      ++s.sample_number;
      std::istringstream in(tc.query);
      for (std::string w; in >> w;) {
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char ch) { return std::tolower(ch); });
        vocabulary.insert(w);
        words += 1.0;
      }
      regions += static_cast<double>(tc.regions.size());
      const Mask gt = rasterize_union(tc.regions, img.height, img.width);
      const double covered = std::accumulate(gt.values().begin(), gt.values().end(), 0.0);
      ratio += covered / area;
    }
  }
  s.word_number = vocabulary.size();
  if (s.sample_number > 0) {
    const auto n = static_cast<double>(s.sample_number);
    s.caption_ave_length = words / n;
    s.ave_region_number = regions / n;
    s.ave_attention_ratio = ratio / n;
  }
  return s;
}

nlohmann::json to_json(const ManifestStats& stats) {
  return {{"sample_number", stats.sample_number},         {"image_number", stats.image_number},
          {"word_number", stats.word_number},             {"caption_ave_length", stats.caption_ave_length},
          {"ave_region_number", stats.ave_region_number}, {"ave_attention_ratio", stats.ave_attention_ratio}};
}

}  // namespace selo
