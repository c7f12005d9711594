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

#ifndef COHESION_SALIENCY_HPP
#define COHESION_SALIENCY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cohesion/discovery.hpp"
#include "cohesion/object_maps.hpp"
#include "cohesion/superpixels.hpp"

namespace cohesion {

/// Saliency values in [0,1] plus the per-element scores behind them.
struct SaliencyMap {
  GrayMap map;
  std::vector<double> element_scores;
};

namespace detail {

// Affine rescale to [0,1]; a constant input maps to `degenerate`.
inline std::vector<double> rescale01(const std::vector<double>& v, double degenerate) {
  std::vector<double> out(v.size(), degenerate);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi - *lo <= 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / (*hi - *lo);
  return out;
}

}  // namespace detail

/// S_i = U^_i exp(-k D^_i) with U^ and D^ rescaled to [0,1], then S divided
/// by its maximum. Constant U rescales to 1 and constant D to 0.
inline std::vector<double> combine_uniqueness_distribution(const std::vector<double>& u, const std::vector<double>& d,
                                                           double k) {
  if (u.size() != d.size()) throw Error("assign_saliency: score vectors differ in length");
  const std::vector<double> uh = detail::rescale01(u, 1.0), dh = detail::rescale01(d, 0.0);
  std::vector<double> s(u.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = uh[i] * std::exp(-k * dh[i]);
  return s;
}

inline std::vector<double> normalize_by_max(std::vector<double> s) {
  const double hi = s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  if (hi > 0.0)
    for (double& x : s) x /= hi;
  return s;
}

inline SaliencyMap assign_saliency(const std::vector<SuperpixelElement>& els, const std::vector<double>& u,
                                   const std::vector<double>& d, double k, std::size_t width, std::size_t height) {
  if (u.size() != els.size()) throw Error("assign_saliency: scores not aligned with elements");
  SaliencyMap out{GrayMap(width, height, 0.0), normalize_by_max(combine_uniqueness_distribution(u, d, k))};
  for (std::size_t e = 0; e < els.size(); ++e)
    for (std::size_t i : els[e].members) out.map[i] = out.element_scores[e];
  return out;
}

/// Otsu's threshold over `bins` equal bins spanning [lo,hi]. The returned
/// value is the upper edge of the last background bin, for use with a
/// strict `>` comparison.
inline double otsu_threshold(const GrayMap& map, double lo, double hi, std::size_t bins = 256) {
  if (!(hi > lo) || map.size() == 0) return lo;
  std::vector<double> hist(bins, 0.0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : map.values()) {
    const auto b = static_cast<std::size_t>(std::clamp((v - lo) / width, 0.0, static_cast<double>(bins - 1)));
    hist[b] += 1.0;
  }
  double total = 0.0, sum = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    total += hist[b];
    sum += static_cast<double>(b) * hist[b];
  }
  double wb = 0.0, sb = 0.0, best = -1.0;
  std::size_t best_bin = 0;
  for (std::size_t b = 0; b + 1 < bins; ++b) {
    wb += hist[b];
    sb += static_cast<double>(b) * hist[b];
    const double wf = total - wb;
    if (wb == 0.0 || wf == 0.0) continue;
    const double mb = sb / wb, mf = (sum - sb) / wf;
    const double between = wb * wf * (mb - mf) * (mb - mf);
    if (between > best) {
      best = between;
      best_bin = b;
    }
  }
  return lo + static_cast<double>(best_bin + 1) * width;
}

/// Binary opening with a 3x3 square; pixels outside the image count as
/// background.
inline Mask morphological_open(const Mask& m) {
  const std::size_t w = m.width(), h = m.height();
  auto apply = [&](const Mask& src, bool erode) {
    Mask dst(w, h);
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) {
        bool acc = erode;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const long rr = static_cast<long>(r) + dr, cc = static_cast<long>(c) + dc;
            const bool inside = rr >= 0 && cc >= 0 && rr < static_cast<long>(h) && cc < static_cast<long>(w);
            const bool v = inside && src.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
            acc = erode ? (acc && v) : (acc || v);
          }
        dst.set(r, c, acc);
      }
    return dst;
  };
  return apply(apply(m, true), false);
}

/// mask = map > t, optionally opened with a 3x3 square.
inline Mask threshold_map(const GrayMap& map, double t, bool morph = false) {
  Mask m(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) m.set(i, map[i] > t);
  return morph ? morphological_open(m) : m;
}

struct SaliencyConfig {
  DiscoveryConfig discovery;
  std::size_t eigenvectors = 2;
  bool eliminate_noise = true;
  SuperpixelConfig superpixels;
  double sigma_p = 0.25;
  double sigma_c = 20.0 / 255.0;
  double k = 6.0;
  bool morph = false;
  std::optional<double> threshold;  ///< on the [0,1] saliency scale; Otsu when empty
};

struct SalientResult {
  Discovery discovery;
  std::vector<ObjectMap> maps;  ///< reverse-corrected per-eigenvector maps
  ObjectMap combined;
  SaliencyMap saliency;
  double threshold = 0.0;
  Mask mask;
};

/// Noise elimination on a combined object map: superpixels, uniqueness and
/// distribution on the map intensities, flat per-element saliency.
inline SaliencyMap eliminate_noise(const ObjectMap& combined, const SaliencyConfig& cfg) {
  SuperpixelConfig sp = cfg.superpixels;
  sp.target = std::min(sp.target, combined.map.size());
  const auto els = segment_superpixels(combined.map, combined.scale, sp);
  const auto u = element_uniqueness(els, cfg.sigma_p);
  const auto d = element_distribution(els, cfg.sigma_c);
  return assign_saliency(els, u, d, cfg.k, combined.map.width(), combined.map.height());
}

/// affinity -> top-S eigenpairs -> reverse-corrected maps -> combined map ->
/// optional noise elimination -> threshold.
inline SalientResult detect_salient(const RgbImage& img, const SaliencyConfig& cfg = {}) {
  if (cfg.eigenvectors == 0) throw Error("detect_salient: need at least one eigenvector");
  SalientResult res;
  res.discovery = discover(img, cfg.eigenvectors, cfg.discovery);
  for (std::size_t r = 1; r <= res.discovery.pairs().size(); ++r)
    res.maps.push_back(reverse_correct(res.discovery.map(r)));
  res.combined = combine_maps(res.maps);
  if (cfg.eliminate_noise) {
    res.saliency = eliminate_noise(res.combined, cfg);
  } else {
    res.saliency.map = res.combined.map;
    for (double& x : res.saliency.map.values()) x /= res.combined.scale;
  }
  res.threshold = cfg.threshold ? *cfg.threshold : otsu_threshold(res.saliency.map, 0.0, 1.0);
  res.mask = threshold_map(res.saliency.map, res.threshold, cfg.morph);
  return res;
}

}  // namespace cohesion

#endif  // COHESION_SALIENCY_HPP
