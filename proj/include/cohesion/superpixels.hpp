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

#ifndef COHESION_SUPERPIXELS_HPP
#define COHESION_SUPERPIXELS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cohesion/image.hpp"

namespace cohesion {

/// A 4-connected group of pixels summarized by its centroid and mean
/// intensity. Centroids are normalized to [0,1] by image height and width;
/// the intensity is divided by the source map's scale.
struct SuperpixelElement {
  std::size_t id = 0;
  std::vector<std::size_t> members;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
  double mean_intensity = 0.0;
};

struct SuperpixelConfig {
  std::size_t target = 150;
  double compactness = 20.0;  ///< spatial weight, in map intensity units per grid step
  std::size_t iterations = 10;
};

namespace detail {

inline std::vector<SuperpixelElement> summarize(const GrayMap& map, const std::vector<std::size_t>& labels,
                                                std::size_t count, double scale) {
  std::vector<SuperpixelElement> els(count);
  const double w = static_cast<double>(map.width()), h = static_cast<double>(map.height());
  for (std::size_t i = 0; i < labels.size(); ++i) els[labels[i]].members.push_back(i);
  for (std::size_t e = 0; e < count; ++e) {
    SuperpixelElement& el = els[e];
    el.id = e;
    double sr = 0.0, sc = 0.0, sv = 0.0;
    for (std::size_t i : el.members) {
      const PixelCoord p = unindex(i, map.width());
      sr += static_cast<double>(p.row) + 0.5;
      sc += static_cast<double>(p.col) + 0.5;
      sv += map[i];
    }
    const double n = static_cast<double>(el.members.size());
    el.centroid_row = sr / n / h;
    el.centroid_col = sc / n / w;
    el.mean_intensity = sv / n / scale;
  }
  return els;
}

}  // namespace detail

/// Grid-seeded iterative clustering in (intensity, row, col), followed by a
/// connectivity pass that gives every element a single 4-connected
/// component; fragments smaller than a quarter of the grid cell join a
/// neighboring element.
inline std::vector<SuperpixelElement> segment_superpixels(const GrayMap& map, double scale,
                                                          const SuperpixelConfig& cfg = {}) {
  const std::size_t w = map.width(), h = map.height(), n = w * h;
  if (cfg.target == 0 || n < cfg.target) throw Error("segment_superpixels: map has fewer pixels than target elements");
  const double step = std::sqrt(static_cast<double>(n) / static_cast<double>(cfg.target));
  const auto nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(w) / step)));
  const auto ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(h) / step)));
  const double sx = static_cast<double>(w) / static_cast<double>(nx);
  const double sy = static_cast<double>(h) / static_cast<double>(ny);

  struct Center {
    double row, col, value;
  };
  std::vector<Center> centers;
  for (std::size_t gy = 0; gy < ny; ++gy)
    for (std::size_t gx = 0; gx < nx; ++gx) {
      // Cell centers in pixel coordinates; the intensity comes from the nearest pixel.
      const double r = (static_cast<double>(gy) + 0.5) * sy - 0.5, c = (static_cast<double>(gx) + 0.5) * sx - 0.5;
      const auto ri = std::min(h - 1, static_cast<std::size_t>(std::lround(r)));
      const auto ci = std::min(w - 1, static_cast<std::size_t>(std::lround(c)));
      centers.push_back({r, c, map.at(ri, ci)});
    }

  const double s = std::max(sx, sy);
  const double spatial = (cfg.compactness / s) * (cfg.compactness / s);
  std::vector<std::size_t> labels(n, 0);
  std::vector<double> best(n);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Center& ck = centers[k];
      const auto r0 = static_cast<std::size_t>(std::max(0.0, ck.row - s));
      const auto r1 = static_cast<std::size_t>(std::min(static_cast<double>(h - 1), ck.row + s));
      const auto c0 = static_cast<std::size_t>(std::max(0.0, ck.col - s));
      const auto c1 = static_cast<std::size_t>(std::min(static_cast<double>(w - 1), ck.col + s));
      for (std::size_t r = r0; r <= r1; ++r)
        for (std::size_t c = c0; c <= c1; ++c) {
          const double dv = map.at(r, c) - ck.value;
          const double dr = static_cast<double>(r) - ck.row, dc = static_cast<double>(c) - ck.col;
          const double d = dv * dv + spatial * (dr * dr + dc * dc);
          const std::size_t i = linear_index(r, c, w);
          if (d < best[i]) {
            best[i] = d;
            labels[i] = k;
          }
        }
    }
    std::vector<double> sr(centers.size(), 0.0), sc(centers.size(), 0.0), sv(centers.size(), 0.0),
        cnt(centers.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const PixelCoord p = unindex(i, w);
      sr[labels[i]] += static_cast<double>(p.row);
      sc[labels[i]] += static_cast<double>(p.col);
      sv[labels[i]] += map[i];
      cnt[labels[i]] += 1.0;
    }
    for (std::size_t k = 0; k < centers.size(); ++k)
      if (cnt[k] > 0.0) centers[k] = {sr[k] / cnt[k], sc[k] / cnt[k], sv[k] / cnt[k]};
  }

  // Connectivity: relabel 4-connected components; small ones adopt the label
  // of an already-finalized neighbor.
  const auto min_size = static_cast<std::size_t>(sx * sy / 4.0);
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> out(n, unset);
  std::vector<std::size_t> stack, comp;
  std::size_t next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (out[seed] != unset) continue;
    const std::size_t lab = labels[seed];
    std::size_t adjacent = unset;
    comp.clear();
    stack.assign(1, seed);
    out[seed] = next;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      const PixelCoord p = unindex(i, w);
      const std::size_t nb[4] = {p.row > 0 ? i - w : unset, p.row + 1 < h ? i + w : unset,
                                 p.col > 0 ? i - 1 : unset, p.col + 1 < w ? i + 1 : unset};
      for (std::size_t j : nb) {
        if (j == unset) continue;
        if (out[j] == unset && labels[j] == lab) {
          out[j] = next;
          stack.push_back(j);
        } else if (out[j] != unset && out[j] != next && adjacent == unset) {
          adjacent = out[j];
        }
      }
    }
    if (comp.size() < min_size && adjacent != unset) {
      for (std::size_t i : comp) out[i] = adjacent;
    } else {
      ++next;
    }
  }
  return detail::summarize(map, out, next, scale);
}

/// U_i = sum_j (c_i - c_j)^2 w_ij with w a Gaussian in centroid distance of
/// bandwidth sigma_p, normalized over j. An infinite bandwidth gives uniform
/// weights.
inline std::vector<double> element_uniqueness(const std::vector<SuperpixelElement>& els, double sigma_p) {
  if (els.empty()) throw Error("element_uniqueness: no elements");
  std::vector<double> u(els.size(), 0.0);
  const double denom = 2.0 * sigma_p * sigma_p;
  for (std::size_t i = 0; i < els.size(); ++i) {
    double z = 0.0, acc = 0.0;
    for (std::size_t j = 0; j < els.size(); ++j) {
      const double dr = els[i].centroid_row - els[j].centroid_row, dc = els[i].centroid_col - els[j].centroid_col;
      const double wgt = std::exp(-(dr * dr + dc * dc) / denom);
      const double dv = els[i].mean_intensity - els[j].mean_intensity;
      z += wgt;
      acc += wgt * dv * dv;
    }
    u[i] = acc / z;
  }
  return u;
}

/// D_i = sum_j ||x_j - mu_i||^2 w_ij with w a Gaussian in intensity
/// difference of bandwidth sigma_c, normalized over j, and mu_i the weighted
/// mean centroid. Small D means the intensity is spatially compact.
inline std::vector<double> element_distribution(const std::vector<SuperpixelElement>& els, double sigma_c) {
  if (els.empty()) throw Error("element_distribution: no elements");
  std::vector<double> d(els.size(), 0.0);
  const double denom = 2.0 * sigma_c * sigma_c;
  std::vector<double> wgt(els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    double z = 0.0, mr = 0.0, mc = 0.0;
    for (std::size_t j = 0; j < els.size(); ++j) {
      const double dv = els[i].mean_intensity - els[j].mean_intensity;
      wgt[j] = std::exp(-dv * dv / denom);
      z += wgt[j];
      mr += wgt[j] * els[j].centroid_row;
      mc += wgt[j] * els[j].centroid_col;
    }
    mr /= z;
    mc /= z;
    double acc = 0.0;
    for (std::size_t j = 0; j < els.size(); ++j) {
      const double dr = els[j].centroid_row - mr, dc = els[j].centroid_col - mc;
      acc += wgt[j] * (dr * dr + dc * dc);
    }
    d[i] = acc / z;
  }
  return d;
}

}  // namespace cohesion

#endif  // COHESION_SUPERPIXELS_HPP
