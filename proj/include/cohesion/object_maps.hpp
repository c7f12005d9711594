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

#ifndef COHESION_OBJECT_MAPS_HPP
#define COHESION_OBJECT_MAPS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cohesion/image.hpp"

namespace cohesion {

inline constexpr double kMapScale = 255.0;

/// Gray map in [0, scale] derived from one or more eigenvectors.
struct ObjectMap {
  GrayMap map;
  double scale = kMapScale;
  std::vector<std::size_t> ranks;  ///< 1-based eigenvector ranks that produced the map

  /// "e1", "e1+e2", ...
  std::string label() const {
    std::string s;
    for (std::size_t i = 0; i < ranks.size(); ++i) s += (i ? "+e" : "e") + std::to_string(ranks[i]);
    return s;
  }
};

/// Min-max normalizes an eigenvector onto the image grid: V = (v - min) /
/// (max - min) * scale. A constant vector gives the all-zero map.
inline ObjectMap eigenvector_to_map(std::span<const double> v, std::size_t width, std::size_t height,
                                    double scale = kMapScale, std::size_t rank = 1) {
  if (v.size() != width * height) throw Error("eigenvector_to_map: length does not match width*height");
  if (!(scale > 0.0)) throw Error("eigenvector_to_map: scale must be positive");
  ObjectMap out{GrayMap(width, height, 0.0), scale, {rank}};
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  const double magnitude = std::max(std::abs(*hi), std::abs(*lo));
  if (range <= 1e-12 * magnitude || range == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out.map[i] = (v[i] - *lo) / range * scale;
  return out;
}

/// Mean of the one-pixel-wide outer ring.
inline double hull_mean(const GrayMap& m) {
  const std::size_t w = m.width(), h = m.height();
  if (w == 0 || h == 0) return 0.0;
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      if (r == 0 || c == 0 || r + 1 == h || c + 1 == w) {
        s += m.at(r, c);
        ++n;
      }
  return s / static_cast<double>(n);
}

/// |V - eta| with eta the hull mean, so that objects end up bright.
inline ObjectMap reverse_correct(const ObjectMap& v) {
  ObjectMap out = v;
  const double eta = hull_mean(v.map);
  for (double& x : out.map.values()) x = std::abs(x - eta);
  return out;
}

/// Pointwise mean of reverse-corrected maps.
inline ObjectMap combine_maps(std::span<const ObjectMap> maps) {
  if (maps.empty()) throw Error("combine_maps: empty sequence");
  ObjectMap out{GrayMap(maps[0].map.width(), maps[0].map.height(), 0.0), maps[0].scale, {}};
  for (const ObjectMap& m : maps) {
    if (m.map.width() != out.map.width() || m.map.height() != out.map.height())
      throw Error("combine_maps: dimension mismatch");
    for (std::size_t i = 0; i < m.map.size(); ++i) out.map[i] += m.map[i];
    out.ranks.insert(out.ranks.end(), m.ranks.begin(), m.ranks.end());
  }
  const double s = static_cast<double>(maps.size());
  for (double& x : out.map.values()) x /= s;
  std::sort(out.ranks.begin(), out.ranks.end());
  return out;
}

}  // namespace cohesion

#endif  // COHESION_OBJECT_MAPS_HPP
