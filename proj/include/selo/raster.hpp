// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "selo/error.hpp"

namespace selo {

/// Dense row-major H x W grid.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, T fill = T{}) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
      throw Error(Errc::InvalidArgument, "raster dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }

  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

  T& operator()(int row, int col) noexcept { return values_[index(row, col)]; }
  const T& operator()(int row, int col) const noexcept { return values_[index(row, col)]; }

  [[nodiscard]] std::span<T> row(int r) noexcept {
    return {values_.data() + index(r, 0), static_cast<std::size_t>(width_)};
  }
  [[nodiscard]] std::span<const T> row(int r) const noexcept {
    return {values_.data() + index(r, 0), static_cast<std::size_t>(width_)};
  }

  [[nodiscard]] std::span<T> values() noexcept { return values_; }
  [[nodiscard]] std::span<const T> values() const noexcept { return values_; }
  [[nodiscard]] T* data() noexcept { return values_.data(); }
  [[nodiscard]] const T* data() const noexcept { return values_.data(); }

  [[nodiscard]] bool same_shape(int height, int width) const noexcept {
    return height_ == height && width_ == width;
  }
  template <typename U>
  [[nodiscard]] bool same_shape(const Raster<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Raster& a, const Raster& b) = default;

 private:
  [[nodiscard]] std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> values_;
};

/// Pixel-level probability raster: the SeLo map and its intermediates.
/// Values are finite and nonnegative.
using ProbabilityMap = Raster<float>;

/// Binary raster, 1 = set.
using Mask = Raster<std::uint8_t>;

/// Throws InvalidArgument if any value is negative or non-finite.
void check_probability_map(const ProbabilityMap& map);

}  // namespace selo
