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

#ifndef COHESION_SYNTH_HPP
#define COHESION_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cohesion/box.hpp"
#include "cohesion/image.hpp"

namespace cohesion {

/// One painted rectangle. When `gradient` is set the color ramps linearly
/// from `color` (top row) to `color_end` (bottom row).
struct RectPaint {
  BoundingBox extent;
  Rgb color{};
  bool gradient = false;
  Rgb color_end{};
};

struct RectSceneSpec {
  std::size_t width = 200;
  std::size_t height = 150;
  Rgb background{0.5, 0.5, 0.5};
  std::vector<RectPaint> rects;
};

/// Paints the rectangles of `spec` over its background. Rectangles must lie
/// inside the canvas and must not overlap.
inline RgbImage synth_two_rectangles(const RectSceneSpec& spec) {
  for (std::size_t a = 0; a < spec.rects.size(); ++a) {
    if (!spec.rects[a].extent.within(spec.width, spec.height))
      throw Error("synth_two_rectangles: rectangle outside canvas");
    for (std::size_t b = a + 1; b < spec.rects.size(); ++b)
      if (iou(spec.rects[a].extent, spec.rects[b].extent) > 0.0)
        throw Error("synth_two_rectangles: rectangles overlap");
  }
  RgbImage img(spec.width, spec.height, spec.background);
  for (const RectPaint& rp : spec.rects) {
    const BoundingBox& e = rp.extent;
    const double rows = static_cast<double>(std::max(1L, e.height() - 1));
    for (long r = e.top; r < e.bottom; ++r) {
      const double t = rp.gradient ? static_cast<double>(r - e.top) / rows : 0.0;
      Rgb px;
      for (std::size_t k = 0; k < 3; ++k) px[k] = rp.color[k] + t * (rp.color_end[k] - rp.color[k]);
      for (long c = e.left; c < e.right; ++c)
        img.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), px);
    }
  }
  return img;
}

/// Synthetic image plus its construction ground truth.
struct Scene {
  std::string name;
  RgbImage image;
  Mask mask;
  std::vector<BoundingBox> boxes;
};

inline Mask box_mask(std::size_t width, std::size_t height, const std::vector<BoundingBox>& boxes) {
  Mask m(width, height);
  for (const auto& b : boxes)
    for (long r = std::max(0L, b.top); r < std::min<long>(b.bottom, static_cast<long>(height)); ++r)
      for (long c = std::max(0L, b.left); c < std::min<long>(b.right, static_cast<long>(width)); ++c)
        m.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), true);
  return m;
}

namespace detail {

inline long scaled(double frac, std::size_t extent) {
  return std::lround(frac * static_cast<double>(extent));
}

inline BoundingBox frac_box(double l, double t, double r, double b, std::size_t w, std::size_t h) {
  return {scaled(l, w), scaled(t, h), scaled(r, w), scaled(b, h), 0.0};
}

inline std::size_t height_for(std::size_t width) { return std::max<std::size_t>(3, width * 3 / 4); }

}  // namespace detail

/// A large solid rectangle of low contrast against the background next to a
/// small high-contrast rectangle whose intensity ramps top to bottom. Ground
/// truth is the small gradient rectangle.
inline Scene scene_gradient_rectangles(std::size_t width = 200) {
  const std::size_t h = detail::height_for(width);
  RectSceneSpec spec{width, h, {0.5, 0.5, 0.5}, {}};
  spec.rects.push_back({detail::frac_box(0.05, 0.13, 0.50, 0.80, width, h), {0.44, 0.50, 0.58}, false, {}});
  spec.rects.push_back(
      {detail::frac_box(0.65, 0.27, 0.90, 0.60, width, h), {0.45, 0.10, 0.10}, true, {0.90, 0.20, 0.20}});
  Scene s{"fig3a1", synth_two_rectangles(spec), {}, {spec.rects[1].extent}};
  s.mask = box_mask(width, h, s.boxes);
  return s;
}

/// Two solid rectangles of one color but different areas. Ground truth is
/// the larger one.
inline Scene scene_equal_color_rectangles(std::size_t width = 200) {
  const std::size_t h = detail::height_for(width);
  RectSceneSpec spec{width, h, {0.5, 0.5, 0.5}, {}};
  spec.rects.push_back({detail::frac_box(0.05, 0.13, 0.50, 0.80, width, h), {0.9, 0.2, 0.2}, false, {}});
  spec.rects.push_back({detail::frac_box(0.65, 0.27, 0.85, 0.53, width, h), {0.9, 0.2, 0.2}, false, {}});
  Scene s{"fig3a2", synth_two_rectangles(spec), {}, {spec.rects[0].extent}};
  s.mask = box_mask(width, h, s.boxes);
  return s;
}

/// Magenta block with shading next to a constant orange block. The shading
/// is a quadratic function of (row - col), so every 3x3 window's top-left and
/// bottom-right pixels share a color that differs from the window mean.
/// The mask marks the magenta block.
inline Scene scene_magenta_orange(std::size_t width = 60, std::size_t height = 40) {
  const std::size_t split = width * 3 / 5;
  RgbImage img(width, height);
  Mask mask(width, height);
  const double span = static_cast<double>(height + split);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      if (c < split) {
        const double d = (static_cast<double>(r) - static_cast<double>(c) + static_cast<double>(split)) / span;
        const double s = 0.35 + 0.6 * d * d;
        img.set(r, c, {s, 0.0, s});
        mask.set(r, c, true);
      } else {
        img.set(r, c, {1.0, 0.55, 0.0});
      }
    }
  return {"magenta_orange", std::move(img), std::move(mask), {}};
}

/// Filled disk of one color on a plain background.
inline Scene scene_disk(std::size_t width = 200, Rgb fg = {0.85, 0.25, 0.2}, Rgb bg = {0.3, 0.45, 0.6}) {
  const std::size_t h = detail::height_for(width);
  RgbImage img(width, h, bg);
  Mask mask(width, h);
  const double cy = 0.5 * static_cast<double>(h), cx = 0.5 * static_cast<double>(width);
  const double rad = 0.28 * static_cast<double>(h);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const double dy = static_cast<double>(r) + 0.5 - cy, dx = static_cast<double>(c) + 0.5 - cx;
      if (dy * dy + dx * dx <= rad * rad) {
        img.set(r, c, fg);
        mask.set(r, c, true);
      }
    }
  return {"disk", std::move(img), std::move(mask), {}};
}

/// Contour width in pixels; at least the 3x3 window side so that no window
/// sees both the interior and the background.
inline constexpr double kContourWidth = 3.0;

/// Object whose fill is close to the background color but which is wrapped
/// in a thin dark contour, with optional Gaussian noise. Mask covers the
/// contour and its interior.
inline Scene scene_low_contrast(std::size_t width = 200, double noise_sigma = 0.0, std::uint64_t seed = 7) {
  const std::size_t h = detail::height_for(width);
  const Rgb bg{0.55, 0.50, 0.40}, fg{0.60, 0.53, 0.42}, line{0.15, 0.12, 0.10};
  RgbImage img(width, h, bg);
  Mask mask(width, h);
  const double cy = 0.5 * static_cast<double>(h), cx = 0.5 * static_cast<double>(width);
  const double ry = 0.30 * static_cast<double>(h), rx = 0.25 * static_cast<double>(width);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const double dy = static_cast<double>(r) + 0.5 - cy, dx = static_cast<double>(c) + 0.5 - cx;
      const double q = std::sqrt(dy * dy / (ry * ry) + dx * dx / (rx * rx));
      // First-order distance (pixels) from the ellipse, measured inward.
      const double grad = std::sqrt(dy * dy / (ry * ry * ry * ry) + dx * dx / (rx * rx * rx * rx));
      const double dist = (1.0 - q) * q / std::max(grad, 1e-12);
      Rgb px = bg;
      if (q <= 1.0) {
        px = dist < kContourWidth ? line : fg;
        mask.set(r, c, true);
      }
      if (noise_sigma > 0.0)
        for (double& v : px) v = std::clamp(v + noise_sigma * noise(rng), 0.0, 1.0);
      img.set(r, c, px);
    }
  return {"fig4", std::move(img), std::move(mask), {}};
}

/// `count` disjoint solid rectangles with distinct colors on a plain
/// background; the ground-truth boxes are returned in `boxes`.
inline Scene scene_rectangles(std::size_t count, std::size_t width = 200, std::uint64_t seed = 1) {
  if (count == 0 || count > 5) throw Error("scene_rectangles: count must be in [1,5]");
  const std::size_t h = detail::height_for(width);
  static constexpr std::array<Rgb, 5> palette{{{0.9, 0.15, 0.1},
                                              {0.1, 0.7, 0.2},
                                              {0.15, 0.2, 0.85},
                                              {0.95, 0.85, 0.1},
                                              {0.6, 0.1, 0.7}}};
  // Cells of a 3x2 grid, one rectangle per cell with jittered extent.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<std::size_t> cells{0, 1, 2, 3, 4, 5};
  std::shuffle(cells.begin(), cells.end(), rng);
  RectSceneSpec spec{width, h, {0.45, 0.45, 0.45}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const double cx = static_cast<double>(cells[i] % 3) / 3.0, cy = static_cast<double>(cells[i] / 3) / 2.0;
    const double l = cx + (0.04 + 0.06 * jitter(rng)) / 3.0, r = cx + (0.70 + 0.25 * jitter(rng)) / 3.0;
    const double t = cy + (0.04 + 0.06 * jitter(rng)) / 2.0, b = cy + (0.70 + 0.25 * jitter(rng)) / 2.0;
    spec.rects.push_back({detail::frac_box(l, t, r, b, width, h), palette[i], false, {}});
  }
  Scene s{"rects" + std::to_string(count), synth_two_rectangles(spec), {}, {}};
  for (const auto& rp : spec.rects) s.boxes.push_back(rp.extent);
  s.mask = box_mask(width, h, s.boxes);
  return s;
}

/// Shaded ellipse (one hue, brightness falling off away from a light
/// direction) on a background with a mild vertical ramp.
inline Scene scene_shaded_object(std::size_t width = 200, Rgb hue = {0.2, 0.75, 0.3}) {
  const std::size_t h = detail::height_for(width);
  RgbImage img(width, h);
  Mask mask(width, h);
  const double cy = 0.55 * static_cast<double>(h), cx = 0.42 * static_cast<double>(width);
  const double ry = 0.30 * static_cast<double>(h), rx = 0.22 * static_cast<double>(width);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const double dy = (static_cast<double>(r) + 0.5 - cy) / ry, dx = (static_cast<double>(c) + 0.5 - cx) / rx;
      const double q = dx * dx + dy * dy;
      const double ramp = 0.35 + 0.2 * static_cast<double>(r) / static_cast<double>(h);
      Rgb px{ramp, ramp, ramp + 0.05};
      if (q <= 1.0) {
        const double shade = 0.55 + 0.45 * std::clamp(1.0 - 0.6 * (dx + 1.0) * 0.5 - 0.4 * (dy + 1.0) * 0.5, 0.0, 1.0);
        px = {hue[0] * shade, hue[1] * shade, hue[2] * shade};
        mask.set(r, c, true);
      }
      img.set(r, c, px);
    }
  return {"shaded", std::move(img), std::move(mask), {}};
}

/// Adds clamped Gaussian noise to every channel.
inline void add_noise(RgbImage& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : img.values()) v = std::clamp(v + noise(rng), 0.0, 1.0);
}

/// The ten scenes of the bundled evaluation fixture, each with a
/// ground-truth mask; the rectangle scenes also carry boxes.
inline std::vector<Scene> fixture_scenes(std::size_t width = 200) {
  std::vector<Scene> out;
  out.push_back(scene_gradient_rectangles(width));
  out.push_back(scene_equal_color_rectangles(width));
  out.push_back(scene_low_contrast(width));
  out.push_back(scene_low_contrast(width, 0.01, 11));
  out.back().name = "fig4_noisy";
  out.push_back(scene_disk(width));
  out.push_back(scene_disk(width, {0.95, 0.8, 0.2}, {0.25, 0.25, 0.3}));
  add_noise(out.back().image, 0.01, 5);
  out.back().name = "disk_noisy";
  out.push_back(scene_shaded_object(width));
  for (std::size_t n = 1; n <= 3; ++n) out.push_back(scene_rectangles(n, width, n + 2));
  return out;
}

}  // namespace cohesion

#endif  // COHESION_SYNTH_HPP
