// SPDX-License-Identifier: Apache-2.0
#include "selo/render.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "colormap_hot.hpp"

namespace selo {

std::array<std::uint8_t, 3> colormap(float p) {
  const double v = std::isfinite(p) ? std::clamp(static_cast<double>(p), 0.0, 1.0) : 0.0;
  return detail::kHotColormap[static_cast<std::size_t>(std::lround(v * 255.0))];
}

RgbImage render_overlay(const RgbImage& source, const ProbabilityMap& map, const std::vector<Polygon>& regions) {
  if (!map.same_shape(source.height, source.width)) {
    throw Error(Errc::DimMismatch, "map is " + std::to_string(map.width()) + "x" + std::to_string(map.height()) +
                                       ", image is " + std::to_string(source.width) + "x" +
                                       std::to_string(source.height));
  }
  RgbImage out = source;
  for (int r = 0; r < source.height; ++r) {
    for (int c = 0; c < source.width; ++c) {
      const auto color = colormap(map(r, c));
      std::uint8_t* px = out.at(r, c);
      for (int ch = 0; ch < 3; ++ch) px[ch] = static_cast<std::uint8_t>((px[ch] + color[ch]) / 2);
    }
  }
  cv::Mat canvas(out.height, out.width, CV_8UC3, out.pixels.data());
  for (const Polygon& poly : regions) {
    std::vector<cv::Point> pts;
    for (const Point& v : poly.vertices()) {
      pts.emplace_back(static_cast<int>(std::lround(v.x)), static_cast<int>(std::lround(v.y)));
    }
    cv::polylines(canvas, pts, true, cv::Scalar(0, 255, 0), 1, cv::LINE_8);
  }
  return out;
}

}  // namespace selo
