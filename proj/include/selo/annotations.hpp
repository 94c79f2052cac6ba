// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selo/raster.hpp"

namespace selo {

/// A point in pixel space: x runs along columns, y along rows, origin at the
/// top-left corner of pixel (0, 0).
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Simple polygon in drawing order. Construction enforces M >= 3, no repeated
/// consecutive vertex and nonzero enclosed area. A trailing vertex equal to
/// the first one (explicitly closed ring) is dropped.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
  [[nodiscard]] double area() const noexcept;
  [[nodiscard]] bool within(int height, int width) const noexcept;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

struct TestCase {
  std::string id;
  std::string query;
  std::vector<Polygon> regions;
  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct ImageEntry {
  std::string file;  // as written in the manifest
  std::filesystem::path path;  // resolved against the manifest directory
  int height = 0;
  int width = 0;
  std::vector<TestCase> cases;
  friend bool operator==(const ImageEntry& a, const ImageEntry& b) {
    return a.file == b.file && a.height == b.height && a.width == b.width && a.cases == b.cases;
  }
};

struct Manifest {
  std::vector<ImageEntry> images;
  friend bool operator==(const Manifest&, const Manifest&) = default;

  [[nodiscard]] std::size_t case_count() const noexcept;
};

/// Per-region geometry used by the attention metrics.
struct GtRegionContext {
  Mask mask;
  Point center;
  double candidate_radius = 0.0;
  Polygon polygon;
};

Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json manifest_to_json(const Manifest& manifest);

/// Whitespace-separated word count.
std::size_t word_count(const std::string& text);

/// Mean of the vertices (not the area centroid).
Point region_center(const Polygon& polygon);

/// expansion / M * sum of vertex distances to the vertex mean.
double candidate_radius(const Polygon& polygon, double expansion);

/// Pixel (r, c) is set iff (c + 0.5, r + 0.5) lies inside the polygon by the
/// even-odd rule or exactly on its boundary. Throws EmptyMask if nothing is set.
Mask rasterize_region(const Polygon& polygon, int height, int width);

/// Union of the rasterized regions; empty regions are skipped but at least one
/// must produce pixels.
Mask rasterize_union(const std::vector<Polygon>& regions, int height, int width);

GtRegionContext make_region_context(const Polygon& polygon, int height, int width, double expansion);

struct ManifestStats {
  std::size_t sample_number = 0;
  std::size_t image_number = 0;
  std::size_t word_number = 0;  // distinct lower-cased words across all queries
  double caption_ave_length = 0.0;
  double ave_region_number = 0.0;
  double ave_attention_ratio = 0.0;
};

ManifestStats manifest_stats(const Manifest& manifest);
nlohmann::json to_json(const ManifestStats& stats);

}  // namespace selo
