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

#ifndef COHESION_PROPOSALS_HPP
#define COHESION_PROPOSALS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "cohesion/box.hpp"
#include "cohesion/canny.hpp"
#include "cohesion/discovery.hpp"
#include "cohesion/parallel.hpp"
#include "cohesion/saliency.hpp"

namespace cohesion {

/// Largest fraction of pixels with fewer than two neighbours that a
/// component may have and still count as closed.
inline constexpr double kEndpointTolerance = 0.05;
inline constexpr double kTruncation = 1e-6;
inline constexpr double kDedupIoU = 0.95;
inline constexpr long kMinBoxSide = 4;

namespace detail {

// True when the component's pixels separate some non-edge pixel inside its
// bounding box from the outside under 4-connectivity. Image borders act as
// walls, so a curve closed against the border also counts.
inline bool encloses_region(const std::vector<std::size_t>& comp, std::size_t w, std::size_t h, long left, long top,
                            long right, long bottom) {
  const long bw = right - left + 2, bh = bottom - top + 2;  // one pixel of padding each side
  auto idx = [&](long r, long c) { return static_cast<std::size_t>((r - top + 1) * bw + (c - left + 1)); };
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(bw * bh), 0);  // 0 open, 1 wall, 2 reached
  for (std::size_t p : comp) grid[idx(static_cast<long>(p / w), static_cast<long>(p % w))] = 1;
  const bool wall_top = top == 0, wall_left = left == 0;
  const bool wall_bottom = bottom == static_cast<long>(h), wall_right = right == static_cast<long>(w);
  std::vector<std::size_t> stack;
  for (long r = top - 1; r <= bottom; ++r)
    for (long c = left - 1; c <= right; ++c) {
      const bool frame = r == top - 1 || r == bottom || c == left - 1 || c == right;
      if (!frame) continue;
      const bool walled = (r == top - 1 && wall_top) || (r == bottom && wall_bottom) ||
                          (c == left - 1 && wall_left) || (c == right && wall_right);
      grid[idx(r, c)] = walled ? 1 : 2;
      if (!walled) stack.push_back(idx(r, c));
    }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const long r = static_cast<long>(i) / bw, c = static_cast<long>(i) % bw;
    const long nb[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
    for (const auto& q : nb) {
      if (q[0] < 0 || q[1] < 0 || q[0] >= bh || q[1] >= bw) continue;
      const std::size_t j = static_cast<std::size_t>(q[0] * bw + q[1]);
      if (grid[j] == 0) {
        grid[j] = 2;
        stack.push_back(j);
      }
    }
  }
  return std::find(grid.begin(), grid.end(), std::uint8_t{0}) != grid.end();
}

}  // namespace detail

/// Tight boxes (half-open, score 0) around the closed 8-connected
/// components of an edge map. A component is closed when at most 5% of its
/// pixels have fewer than two neighbours in it and it encloses a region.
/// Pixels on the image border never count as loose ends, since the border
/// closes the curve.
inline std::vector<BoundingBox> closed_edge_boxes(const Mask& edges) {
  const std::size_t w = edges.width(), h = edges.height();
  std::vector<BoundingBox> out;
  std::vector<std::uint8_t> seen(edges.size(), 0);
  std::vector<std::size_t> comp, stack;
  for (std::size_t s = 0; s < edges.size(); ++s) {
    if (!edges[s] || seen[s]) continue;
    comp.clear();
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      const long r = static_cast<long>(i / w), c = static_cast<long>(i % w);
      for (long dr = -1; dr <= 1; ++dr)
        for (long dc = -1; dc <= 1; ++dc) {
          const long rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(w)) continue;
          const std::size_t j = static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc);
          if (edges[j] && !seen[j]) {
            seen[j] = 1;
            stack.push_back(j);
          }
        }
    }
    long left = static_cast<long>(w), top = static_cast<long>(h), right = 0, bottom = 0;
    std::size_t endpoints = 0;
    for (std::size_t i : comp) {
      const long r = static_cast<long>(i / w), c = static_cast<long>(i % w);
      left = std::min(left, c);
      top = std::min(top, r);
      right = std::max(right, c + 1);
      bottom = std::max(bottom, r + 1);
      int nb = 0;
      for (long dr = -1; dr <= 1; ++dr)
        for (long dc = -1; dc <= 1; ++dc) {
          const long rr = r + dr, cc = c + dc;
          if ((dr || dc) && rr >= 0 && cc >= 0 && rr < static_cast<long>(h) && cc < static_cast<long>(w) &&
              edges.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)))
            ++nb;
        }
      const bool on_border = r == 0 || c == 0 || r + 1 == static_cast<long>(h) || c + 1 == static_cast<long>(w);
      if (nb < 2 && !on_border) ++endpoints;
    }
    if (static_cast<double>(endpoints) > kEndpointTolerance * static_cast<double>(comp.size())) continue;
    if (!detail::encloses_region(comp, w, h, left, top, right, bottom)) continue;
    out.push_back({left, top, right, bottom, 0.0});
  }
  return out;
}

/// Mean of `map` over the box.
inline double box_mean(const GrayMap& map, const BoundingBox& b) {
  double s = 0.0;
  for (long r = b.top; r < b.bottom; ++r)
    for (long c = b.left; c < b.right; ++c) s += map.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  return s / static_cast<double>(b.area());
}

/// Uniqueness in which only brighter-than-neighbour contrast counts:
/// U_i = sum_j max(c_i - c_j, 0)^2 w_ij, with the same normalized spatial
/// weights as element_uniqueness.
inline std::vector<double> bright_uniqueness(const std::vector<SuperpixelElement>& els, double sigma_p) {
  std::vector<double> u(els.size(), 0.0);
  const double denom = 2.0 * sigma_p * sigma_p;
  parallel_for(els.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double z = 0.0, acc = 0.0;
      for (std::size_t j = 0; j < els.size(); ++j) {
        const double dr = els[i].centroid_row - els[j].centroid_row, dc = els[i].centroid_col - els[j].centroid_col;
        const double wgt = std::exp(-(dr * dr + dc * dc) / denom);
        const double dv = std::max(els[i].mean_intensity - els[j].mean_intensity, 0.0);
        z += wgt;
        acc += wgt * dv * dv;
      }
      u[i] = acc / z;
    }
  });
  return u;
}

struct ObjectnessConfig {
  double sigma_p = 0.25;
  double sigma_c = 20.0 / 255.0;
  double k = 6.0;
};

/// Scores boxes as elements (mean intensity in the box, normalized box
/// center) with uniqueness and distribution combined as for saliency.
/// Raw scores below 1e-6 become exactly 0; the rest are divided by the
/// maximum. `means` are box means on a [0, scale] map.
inline std::vector<BoundingBox> truncated_objectness(std::vector<BoundingBox> boxes, const std::vector<double>& means,
                                                     double scale, std::size_t width, std::size_t height,
                                                     const ObjectnessConfig& cfg = {}) {
  if (boxes.empty()) return boxes;
  if (means.size() != boxes.size()) throw Error("truncated_objectness: means not aligned with boxes");
  std::vector<SuperpixelElement> els(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].within(width, height)) throw Error("truncated_objectness: box outside the map");
    els[i].id = i;
    els[i].centroid_row = 0.5 * static_cast<double>(boxes[i].top + boxes[i].bottom) / static_cast<double>(height);
    els[i].centroid_col = 0.5 * static_cast<double>(boxes[i].left + boxes[i].right) / static_cast<double>(width);
    els[i].mean_intensity = means[i] / scale;
  }
  std::vector<double> s =
      combine_uniqueness_distribution(bright_uniqueness(els, cfg.sigma_p), element_distribution(els, cfg.sigma_c), cfg.k);
  for (double& x : s)
    if (x < kTruncation) x = 0.0;
  s = normalize_by_max(std::move(s));
  for (std::size_t i = 0; i < boxes.size(); ++i) boxes[i].score = s[i];
  return boxes;
}

inline std::vector<BoundingBox> truncated_objectness(std::vector<BoundingBox> boxes, const ObjectMap& map,
                                                     const ObjectnessConfig& cfg = {}) {
  std::vector<double> means(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!boxes[i].within(map.map.width(), map.map.height()))
      throw Error("truncated_objectness: box outside the map");
    means[i] = box_mean(map.map, boxes[i]);
  }
  return truncated_objectness(std::move(boxes), means, map.scale, map.map.width(), map.map.height(), cfg);
}

/// Descending score, ties broken by position, so the order is total.
inline bool proposal_order(const BoundingBox& a, const BoundingBox& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.top, a.left, a.bottom, a.right) < std::tie(b.top, b.left, b.bottom, b.right);
}

/// Greedy suppression in proposal order: a box is dropped when it overlaps an
/// already kept box with IoU above `threshold`.
inline std::vector<BoundingBox> dedup_boxes(std::vector<BoundingBox> boxes, double threshold = kDedupIoU) {
  std::stable_sort(boxes.begin(), boxes.end(), proposal_order);
  std::vector<BoundingBox> kept;
  for (const BoundingBox& b : boxes)
    if (std::none_of(kept.begin(), kept.end(), [&](const BoundingBox& k) { return iou(k, b) > threshold; }))
      kept.push_back(b);
  return kept;
}

enum class ScoreMap { e1, e1e2, per_source };

inline ScoreMap parse_score_map(const std::string& s) {
  if (s == "e1") return ScoreMap::e1;
  if (s == "e1e2") return ScoreMap::e1e2;
  if (s == "per-source") return ScoreMap::per_source;
  throw Error("unknown score map '" + s + "' (expected e1, e1e2 or per-source)");
}

inline std::string to_string(ScoreMap m) {
  switch (m) {
    case ScoreMap::e1: return "e1";
    case ScoreMap::e1e2: return "e1e2";
    case ScoreMap::per_source: return "per-source";
  }
  return "e1e2";
}

struct ProposalConfig {
  DiscoveryConfig discovery;
  std::size_t n_single = 80;
  std::size_t n_pairwise = 6;
  CannyConfig canny;
  ObjectnessConfig objectness;
  ScoreMap score_map = ScoreMap::e1e2;
  std::size_t max_boxes = 0;  ///< 0 keeps all
};

struct ProposalSet {
  std::string source;
  std::vector<BoundingBox> boxes;        ///< descending score
  std::vector<std::string> map_labels;   ///< maps that were searched for edges
  std::size_t eigenpairs_used = 0;
  std::vector<double> eigenvalues;       ///< of the eigenpairs used, descending
  std::size_t candidates = 0;            ///< distinct boxes before scoring
};

/// Boxes from a fixed list of object maps, scored and deduplicated.
/// `reference` is the map used for scoring unless per-source scoring is on.
inline ProposalSet proposals_from_maps(const std::vector<ObjectMap>& maps, const ObjectMap* reference,
                                       const ProposalConfig& cfg) {
  ProposalSet set;
  if (maps.empty()) return set;
  const std::size_t w = maps[0].map.width(), h = maps[0].map.height();
  std::vector<std::vector<BoundingBox>> per_map(maps.size());
  parallel_for(maps.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      CannyConfig cc = cfg.canny;
      const double f = maps[m].scale / kMapScale;  // thresholds are given on the 0..255 scale
      cc.low *= f;
      cc.high *= f;
      for (const BoundingBox& box : closed_edge_boxes(canny_edges(maps[m].map, cc)))
        if (box.width() >= kMinBoxSide && box.height() >= kMinBoxSide) per_map[m].push_back(box);
    }
  }, 1);

  std::vector<BoundingBox> boxes;
  std::vector<std::size_t> source;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    set.map_labels.push_back(maps[m].label());
    for (const BoundingBox& b : per_map[m])
      if (std::none_of(boxes.begin(), boxes.end(), [&](const BoundingBox& o) { return o.same_extent(b); })) {
        boxes.push_back(b);
        source.push_back(m);
      }
  }
  set.candidates = boxes.size();
  if (boxes.empty()) return set;

  std::vector<double> means(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const ObjectMap& sm = (cfg.score_map == ScoreMap::per_source || !reference) ? maps[source[i]] : *reference;
    means[i] = box_mean(sm.map, boxes[i]) * kMapScale / sm.scale;
  }
  boxes = truncated_objectness(std::move(boxes), means, kMapScale, w, h, cfg.objectness);
  std::erase_if(boxes, [](const BoundingBox& b) { return b.score <= 0.0; });
  set.boxes = dedup_boxes(std::move(boxes));
  if (cfg.max_boxes && set.boxes.size() > cfg.max_boxes) set.boxes.resize(cfg.max_boxes);
  return set;
}

/// Object maps of the first n_single eigenvectors plus the pairwise
/// combinations of the first n_pairwise, searched for closed edges.
inline ProposalSet generate_proposals(const RgbImage& img, const ProposalConfig& cfg = {},
                                      const std::function<void(const std::string&)>& warn = {}) {
  if (cfg.n_single == 0 || cfg.n_pairwise > cfg.n_single)
    throw Error("generate_proposals: need n_single >= n_pairwise and n_single > 0");
  // A uniform image has an affinity that depends only on the window layout;
  // its eigenvector maps carry no content, so there is nothing to propose.
  const auto v = img.values();
  bool uniform = true;
  for (std::size_t i = 3; i < v.size() && uniform; ++i) uniform = v[i] == v[i % 3];
  if (uniform) return {};
  const Discovery d = discover(img, cfg.n_single, cfg.discovery);
  std::size_t available = d.solve.converged;
  if (available < cfg.n_single && warn)
    warn("only " + std::to_string(available) + " of " + std::to_string(cfg.n_single) + " eigenpairs converged");
  available = std::max<std::size_t>(available, std::min<std::size_t>(1, d.pairs().size()));

  std::vector<ObjectMap> maps, corrected;
  for (std::size_t r = 1; r <= available; ++r) {
    maps.push_back(d.map(r));
    corrected.push_back(reverse_correct(maps.back()));
  }
  const std::size_t np = std::min(cfg.n_pairwise, available);
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = a + 1; b < np; ++b) {
      const ObjectMap pair[2] = {corrected[a], corrected[b]};
      maps.push_back(combine_maps(pair));
    }

  ObjectMap reference;
  if (!corrected.empty()) {
    if (cfg.score_map == ScoreMap::e1 || corrected.size() == 1) {
      reference = corrected[0];
    } else {
      const ObjectMap pair[2] = {corrected[0], corrected[1]};
      reference = combine_maps(pair);
    }
  }
  ProposalSet set = proposals_from_maps(maps, corrected.empty() ? nullptr : &reference, cfg);
  set.eigenpairs_used = available;
  for (std::size_t r = 0; r < available; ++r) set.eigenvalues.push_back(d.pairs()[r].value);
  return set;
}

}  // namespace cohesion

#endif  // COHESION_PROPOSALS_HPP
