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

#ifndef COHESION_CANNY_HPP
#define COHESION_CANNY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "cohesion/image.hpp"

namespace cohesion {

namespace detail {

inline double clamped(std::span<const double> v, std::size_t w, std::size_t h, long r, long c) {
  r = std::clamp(r, 0L, static_cast<long>(h) - 1);
  c = std::clamp(c, 0L, static_cast<long>(w) - 1);
  return v[static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c)];
}

inline std::array<double, 5> gaussian_taps(double sigma) {
  std::array<double, 5> k{};
  double s = 0.0;
  for (int i = -2; i <= 2; ++i) s += k[static_cast<std::size_t>(i + 2)] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& x : k) x /= s;
  return k;
}

// Separable 5x5 Gaussian with replicated borders.
inline std::vector<double> gaussian_blur5(std::span<const double> in, std::size_t w, std::size_t h, double sigma) {
  const auto k = gaussian_taps(sigma);
  std::vector<double> tmp(in.size()), out(in.size());
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (int d = -2; d <= 2; ++d)
        s += k[static_cast<std::size_t>(d + 2)] * clamped(in, w, h, static_cast<long>(r), static_cast<long>(c) + d);
      tmp[r * w + c] = s;
    }
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (int d = -2; d <= 2; ++d)
        s += k[static_cast<std::size_t>(d + 2)] * clamped(tmp, w, h, static_cast<long>(r) + d, static_cast<long>(c));
      out[r * w + c] = s;
    }
  return out;
}

}  // namespace detail

struct CannyConfig {
  double low = 25.5;
  double high = 51.0;
  double sigma = 1.4;
};

/// Canny edge detector on a gray map: 5x5 Gaussian, Sobel gradients,
/// non-maximum suppression along the quantized gradient direction (borders
/// replicated) and
/// 8-connected hysteresis. Thresholds apply to the raw Sobel L2 magnitude.
inline Mask canny_edges(const GrayMap& map, const CannyConfig& cfg = {}) {
  if (!(cfg.low >= 0.0 && cfg.low < cfg.high)) throw Error("canny_edges: need 0 <= low < high");
  const std::size_t w = map.width(), h = map.height();
  Mask edges(w, h);
  if (w < 3 || h < 3) return edges;
  const auto s = detail::gaussian_blur5(map.values(), w, h, cfg.sigma);
  std::vector<double> gx(s.size()), gy(s.size()), mag(s.size());
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      auto at = [&](int dr, int dc) {
        return detail::clamped(s, w, h, static_cast<long>(r) + dr, static_cast<long>(c) + dc);
      };
      const double x = (at(-1, 1) + 2 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2 * at(0, -1) + at(1, -1));
      const double y = (at(1, -1) + 2 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2 * at(-1, 0) + at(-1, 1));
      gx[r * w + c] = x;
      gy[r * w + c] = y;
      mag[r * w + c] = std::hypot(x, y);
    }

  // 0 = weak candidate, 1 = strong, 255 = suppressed.
  std::vector<std::uint8_t> state(s.size(), 255);
  const double tan22 = std::tan(std::numbers::pi / 8.0);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const double m = mag[i];
      if (m <= cfg.low) continue;
      const double ax = std::abs(gx[i]), ay = std::abs(gy[i]);
      long dr = 0, dc = 0;
      if (ay <= tan22 * ax) {
        dc = 1;
      } else if (ax <= tan22 * ay) {
        dr = 1;
      } else {
        dr = 1;
        dc = (gx[i] > 0) == (gy[i] > 0) ? 1 : -1;
      }
      const long rl = static_cast<long>(r), cl = static_cast<long>(c);
      const double fwd = detail::clamped(mag, w, h, rl + dr, cl + dc);
      const double back = detail::clamped(mag, w, h, rl - dr, cl - dc);
      if (m > back && m >= fwd) state[i] = m > cfg.high ? 1 : 0;
    }

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] == 1) {
      edges.set(i, true);
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const long r = static_cast<long>(i / w), c = static_cast<long>(i % w);
    for (long dr = -1; dr <= 1; ++dr)
      for (long dc = -1; dc <= 1; ++dc) {
        const long rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(w)) continue;
        const std::size_t j = static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc);
        if (state[j] == 0 && !edges[j]) {
          edges.set(j, true);
          stack.push_back(j);
        }
      }
  }
  return edges;
}

}  // namespace cohesion

#endif  // COHESION_CANNY_HPP
