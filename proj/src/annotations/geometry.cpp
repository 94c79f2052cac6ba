// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "selo/annotations.hpp"

namespace selo {

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
  if (vertices_.size() < 3) {
    throw Error(Errc::PolygonDegenerate, "polygon needs at least 3 distinct vertices");
  }
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(Errc::PolygonDegenerate, "polygon vertex is not finite");
    }
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[(i + 1) % vertices_.size()]) {
      throw Error(Errc::PolygonDegenerate, "polygon repeats a vertex consecutively");
    }
  }
  if (!(area() > 0.0)) throw Error(Errc::PolygonDegenerate, "polygon encloses zero area");
}

double Polygon::area() const noexcept {
  double twice = 0.0;
  const std::size_t m = vertices_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[(i + 1) % m];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) * 0.5;
}

bool Polygon::within(int height, int width) const noexcept {
  return std::all_of(vertices_.begin(), vertices_.end(), [&](const Point& p) {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
  });
}

Point region_center(const Polygon& polygon) {
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : polygon.vertices()) {
    sx += p.x;
    sy += p.y;
  }
  const auto m = static_cast<double>(polygon.size());
  return {sx / m, sy / m};
}

double candidate_radius(const Polygon& polygon, double expansion) {
  if (!(expansion > 0.0)) throw Error(Errc::InvalidArgument, "expansion factor must be > 0");
  const Point c = region_center(polygon);
  double total = 0.0;
  for (const auto& p : polygon.vertices()) total += std::hypot(p.x - c.x, p.y - c.y);
  return expansion / static_cast<double>(polygon.size()) * total;
}

namespace {

// Exact on-segment test for a pixel center, shared with the crossing rule so
// that boundary pixels are decided by one predicate.
bool on_segment(const Point& a, const Point& b, double x, double y) {
  const double cross = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
  if (cross != 0.0) return false;
  return x >= std::min(a.x, b.x) && x <= std::max(a.x, b.x) && y >= std::min(a.y, b.y) &&
         y <= std::max(a.y, b.y);
}

void rasterize_into(const Polygon& polygon, Mask& mask) {
  const int height = mask.height();
  const int width = mask.width();
  const auto& v = polygon.vertices();
  const std::size_t m = v.size();

  double ymin = v[0].y;
  double ymax = v[0].y;
  for (const auto& p : v) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int r0 = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
  const int r1 = std::min(height - 1, static_cast<int>(std::ceil(ymax - 0.5)));

  std::vector<double> crossings;
  for (int r = r0; r <= r1; ++r) {
    const double y = r + 0.5;
    auto row = mask.row(r);

    crossings.clear();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
      const Point& pi = v[i];
      const Point& pj = v[j];
      if ((pi.y > y) != (pj.y > y)) {
        crossings.push_back((pj.x - pi.x) * (y - pi.y) / (pj.y - pi.y) + pi.x);
      }
    }
    std::sort(crossings.begin(), crossings.end());
    // x is inside iff an odd number of crossings lie strictly to its right,
    // i.e. x in [c[2k], c[2k+1]).
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const int c0 = std::max(0, static_cast<int>(std::ceil(crossings[k] - 0.5)));
      const int c1 = std::min(width - 1, static_cast<int>(std::ceil(crossings[k + 1] - 0.5)) - 1);
      for (int c = c0; c <= c1; ++c) row[static_cast<std::size_t>(c)] = 1;
    }

    // Boundary pixel centers.
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
      const Point& a = v[j];
      const Point& b = v[i];
      if (y < std::min(a.y, b.y) || y > std::max(a.y, b.y)) continue;
      double xlo;
      double xhi;
      if (a.y == b.y) {
        xlo = std::min(a.x, b.x);
        xhi = std::max(a.x, b.x);
      } else {
        const double x = a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
        xlo = x - 1.0;
        xhi = x + 1.0;
      }
      const int c0 = std::max(0, static_cast<int>(std::floor(xlo - 0.5)));
      const int c1 = std::min(width - 1, static_cast<int>(std::ceil(xhi - 0.5)));
      for (int c = c0; c <= c1; ++c) {
        if (on_segment(a, b, c + 0.5, y)) row[static_cast<std::size_t>(c)] = 1;
      }
    }
  }
}

bool any_set(const Mask& mask) {
  return std::any_of(mask.values().begin(), mask.values().end(), [](std::uint8_t b) { return b != 0; });
}

}  // namespace

Mask rasterize_region(const Polygon& polygon, int height, int width) {
  Mask mask(height, width, 0);
  rasterize_into(polygon, mask);
  if (!any_set(mask)) throw Error(Errc::EmptyMask, "region covers no pixel center");
  return mask;
}

Mask rasterize_union(const std::vector<Polygon>& regions, int height, int width) {
  Mask mask(height, width, 0);
  for (const auto& poly : regions) rasterize_into(poly, mask);
  if (!any_set(mask)) throw Error(Errc::EmptyGt, "ground-truth regions cover no pixel");
  return mask;
}

GtRegionContext make_region_context(const Polygon& polygon, int height, int width, double expansion) {
  return GtRegionContext{rasterize_region(polygon, height, width), region_center(polygon),
                         candidate_radius(polygon, expansion), polygon};
}

}  // namespace selo
