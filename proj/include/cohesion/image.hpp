// Copyright 2026 The Cohesion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COHESION_IMAGE_HPP
#define COHESION_IMAGE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohesion {

/// Thrown for malformed inputs and unreadable files.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Rgb = std::array<double, 3>;

struct PixelCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Row-major linear index, i = row * width + col.
constexpr std::size_t linear_index(std::size_t row, std::size_t col, std::size_t width) noexcept {
  return row * width + col;
}

constexpr PixelCoord unindex(std::size_t i, std::size_t width) noexcept {
  return {i / width, i % width};
}

/// Three-channel raster with channel values in [0,1], stored row-major and
/// interleaved (r,g,b,r,g,b,...).
class RgbImage {
public:
  RgbImage() = default;

  RgbImage(std::size_t width, std::size_t height, Rgb fill = {0.0, 0.0, 0.0})
      : width_(width), height_(height), data_(3 * width * height) {
    for (std::size_t i = 0; i < width * height; ++i) set(i, fill);
  }

  RgbImage(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != 3 * width_ * height_)
      throw Error("RgbImage: value count does not match 3*width*height");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }
  bool empty() const noexcept { return data_.empty(); }

  Rgb at(std::size_t i) const noexcept { return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]}; }
  Rgb at(std::size_t row, std::size_t col) const noexcept { return at(linear_index(row, col, width_)); }

  void set(std::size_t i, const Rgb& v) noexcept {
    data_[3 * i] = v[0];
    data_[3 * i + 1] = v[1];
    data_[3 * i + 2] = v[2];
  }
  void set(std::size_t row, std::size_t col, const Rgb& v) noexcept { set(linear_index(row, col, width_), v); }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  /// True when the raster can host at least one full 3x3 window and every
  /// channel is inside [0,1].
  bool valid() const noexcept {
    if (width_ < 3 || height_ < 3) return false;
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Single-channel real map sharing RgbImage's indexing. The value range is
/// whatever the producer declares.
class GrayMap {
public:
  GrayMap() = default;
  GrayMap(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill) {}
  GrayMap(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) throw Error("GrayMap: value count does not match width*height");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double at(std::size_t row, std::size_t col) const noexcept { return data_[linear_index(row, col, width_)]; }
  double& at(std::size_t row, std::size_t col) noexcept { return data_[linear_index(row, col, width_)]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  double min() const { return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end()); }
  double max() const { return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end()); }

  friend bool operator==(const GrayMap&, const GrayMap&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Binary raster; 1 = foreground.
class Mask {
public:
  Mask() = default;
  Mask(std::size_t width, std::size_t height, bool fill = false)
      : width_(width), height_(height), data_(width * height, fill ? 1 : 0) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool operator[](std::size_t i) const noexcept { return data_[i] != 0; }
  void set(std::size_t i, bool v) noexcept { data_[i] = v ? 1 : 0; }
  bool at(std::size_t row, std::size_t col) const noexcept { return data_[linear_index(row, col, width_)] != 0; }
  void set(std::size_t row, std::size_t col, bool v) noexcept { data_[linear_index(row, col, width_)] = v ? 1 : 0; }

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const Mask&, const Mask&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Pixel-level intersection over union of two masks of equal size. Two empty
/// masks count as a perfect match.
inline double mask_iou(const Mask& a, const Mask& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw Error("mask_iou: dimension mismatch");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace cohesion

#endif  // COHESION_IMAGE_HPP
