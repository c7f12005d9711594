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

#ifndef COHESION_BOX_HPP
#define COHESION_BOX_HPP

#include <algorithm>
#include <cstddef>

namespace cohesion {

/// Axis-aligned pixel rectangle, half-open: [left,right) x [top,bottom).
struct BoundingBox {
  long left = 0;
  long top = 0;
  long right = 0;
  long bottom = 0;
  double score = 0.0;

  long width() const noexcept { return right - left; }
  long height() const noexcept { return bottom - top; }
  long area() const noexcept { return valid() ? width() * height() : 0; }
  bool valid() const noexcept { return left < right && top < bottom; }
  bool within(std::size_t image_width, std::size_t image_height) const noexcept {
    return valid() && left >= 0 && top >= 0 && right <= static_cast<long>(image_width) &&
           bottom <= static_cast<long>(image_height);
  }
  bool same_extent(const BoundingBox& o) const noexcept {
    return left == o.left && top == o.top && right == o.right && bottom == o.bottom;
  }
};

/// Intersection over union using half-open pixel areas.
inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const long iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  const long ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  const long inter = (iw > 0 && ih > 0) ? iw * ih : 0;
  const long uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

}  // namespace cohesion

#endif  // COHESION_BOX_HPP
