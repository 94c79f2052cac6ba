// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace selo {

/// 8-bit RGB raster, interleaved, row-major.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  [[nodiscard]] std::uint8_t* at(int row, int col) {
    return pixels.data() + (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + col) * 3;
  }
  [[nodiscard]] const std::uint8_t* at(int row, int col) const {
    return pixels.data() + (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + col) * 3;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Reads PNG or TIFF; grayscale and 16-bit inputs are converted to 8-bit RGB.
RgbImage read_rgb_image(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);
std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image);
RgbImage crop(const RgbImage& image, int x0, int y0, int width, int height);

std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace selo
