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

#ifndef COHESION_EVAL_HPP
#define COHESION_EVAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohesion/box.hpp"
#include "cohesion/image.hpp"
#include "cohesion/image_io.hpp"

namespace cohesion {

inline constexpr double kBetaSquared = 0.3;
inline constexpr std::size_t kThresholds = 256;

/// (1 + b2) P R / (b2 P + R), with P = R = 0 giving 0.
inline double f_beta(double precision, double recall, double beta_squared = kBetaSquared) {
  const double den = beta_squared * precision + recall;
  return den > 0.0 ? (1.0 + beta_squared) * precision * recall / den : 0.0;
}

struct PRPoint {
  int threshold = 0;
  double precision = 1.0;
  double recall = 0.0;
};

/// One point per threshold t = 0..255; a pixel is predicted when its
/// quantized map value exceeds t.
struct PRCurve {
  std::array<PRPoint, kThresholds> points{};

  /// Largest F_beta over the thresholds, with its point.
  std::pair<double, PRPoint> best_f(double beta_squared = kBetaSquared) const {
    std::pair<double, PRPoint> best{-1.0, {}};
    for (const PRPoint& p : points) {
      const double f = f_beta(p.precision, p.recall, beta_squared);
      if (f > best.first) best = {f, p};
    }
    return best;
  }
};

/// Map value on the [0, scale] range rounded to 0..255.
inline int quantize_level(double v, double scale) {
  return static_cast<int>(std::lround(std::clamp(v / scale, 0.0, 1.0) * 255.0));
}

struct PixelCounts {
  std::array<double, kThresholds> tp{}, fp{};
  double positives = 0.0;
};

inline PixelCounts count_pixels(const GrayMap& map, const Mask& gt, double scale) {
  if (map.width() != gt.width() || map.height() != gt.height()) throw Error("pr_curve: map and mask sizes differ");
  // Histogram per level, then suffix sums give the counts for map > t.
  std::array<double, kThresholds> hist_pos{}, hist_neg{};
  PixelCounts pc;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto q = static_cast<std::size_t>(quantize_level(map[i], scale));
    (gt[i] ? hist_pos : hist_neg)[q] += 1.0;
    if (gt[i]) pc.positives += 1.0;
  }
  double tp = 0.0, fp = 0.0;
  for (std::size_t t = kThresholds; t-- > 0;) {
    pc.tp[t] = tp;  // levels strictly above t
    pc.fp[t] = fp;
    tp += hist_pos[t];
    fp += hist_neg[t];
  }
  return pc;
}

inline PRPoint pr_point(int t, double tp, double fp, double positives) {
  return {t, tp + fp > 0.0 ? tp / (tp + fp) : 1.0, positives > 0.0 ? tp / positives : 0.0};
}

/// Dataset PR curve. Pooled (default) sums pixel counts over all images;
/// per-image averages the per-image precision and recall.
inline PRCurve pr_curve(std::span<const GrayMap> maps, std::span<const Mask> gts, double scale = 255.0,
                        bool per_image = false) {
  if (maps.size() != gts.size()) throw Error("pr_curve: maps and masks differ in count");
  PRCurve curve;
  for (std::size_t t = 0; t < kThresholds; ++t) curve.points[t].threshold = static_cast<int>(t);
  if (maps.empty()) return curve;
  std::vector<PixelCounts> counts;
  for (std::size_t i = 0; i < maps.size(); ++i) counts.push_back(count_pixels(maps[i], gts[i], scale));
  for (std::size_t t = 0; t < kThresholds; ++t) {
    const int ti = static_cast<int>(t);
    if (per_image) {
      double p = 0.0, r = 0.0;
      for (const PixelCounts& c : counts) {
        const PRPoint q = pr_point(ti, c.tp[t], c.fp[t], c.positives);
        p += q.precision;
        r += q.recall;
      }
      const double n = static_cast<double>(counts.size());
      curve.points[t] = {ti, p / n, r / n};
    } else {
      double tp = 0.0, fp = 0.0, pos = 0.0;
      for (const PixelCounts& c : counts) {
        tp += c.tp[t];
        fp += c.fp[t];
        pos += c.positives;
      }
      curve.points[t] = pr_point(ti, tp, fp, pos);
    }
  }
  return curve;
}

inline PRCurve pr_curve(const GrayMap& map, const Mask& gt, double scale = 255.0) {
  return pr_curve(std::span<const GrayMap>(&map, 1), std::span<const Mask>(&gt, 1), scale);
}

/// Precision and recall of a binary prediction.
inline std::pair<double, double> mask_precision_recall(const Mask& pred, const Mask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) throw Error("mask sizes differ");
  double tp = 0.0, fp = 0.0, pos = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    tp += pred[i] && gt[i];
    fp += pred[i] && !gt[i];
    pos += gt[i];
  }
  const PRPoint p = pr_point(0, tp, fp, pos);
  return {p.precision, p.recall};
}

/// Fraction of ground-truth boxes hit (IoU >= threshold) by any of the
/// first k proposals.
inline double recall_at_k(std::span<const BoundingBox> proposals, std::span<const BoundingBox> gt,
                          double iou_threshold = 0.5, std::size_t k = 100) {
  if (gt.empty()) return 0.0;
  const std::size_t n = std::min(k, proposals.size());
  std::size_t hits = 0;
  for (const BoundingBox& g : gt)
    for (std::size_t i = 0; i < n; ++i)
      if (iou(proposals[i], g) >= iou_threshold) {
        ++hits;
        break;
      }
  return static_cast<double>(hits) / static_cast<double>(gt.size());
}

struct MaskSample {
  std::filesystem::path image_path;
  std::filesystem::path mask_path;
  RgbImage image;
  Mask mask;
};

struct BoxSample {
  std::filesystem::path image_path;
  std::filesystem::path annotation_path;
  RgbImage image;
  std::vector<BoundingBox> boxes;
};

struct SampleError {
  std::size_t line = 0;
  std::string message;
};

template <class Sample>
struct Dataset {
  std::vector<Sample> samples;
  std::vector<SampleError> errors;
};

struct ManifestEntry {
  std::size_t line = 0;
  std::filesystem::path image;
  std::filesystem::path annotation;
};

/// `image<TAB>annotation` per line, relative to `root`. Blank lines and
/// lines starting with '#' are skipped; malformed lines become errors.
inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& root, const std::filesystem::path& manifest,
                                                std::vector<SampleError>& errors) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  std::vector<ManifestEntry> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      errors.push_back({n, "expected image<TAB>annotation"});
      continue;
    }
    out.push_back({n, root / line.substr(0, tab), root / line.substr(tab + 1)});
  }
  return out;
}

inline Dataset<MaskSample> load_mask_dataset(const std::filesystem::path& root, const std::filesystem::path& manifest) {
  Dataset<MaskSample> ds;
  for (const ManifestEntry& e : read_manifest(root, manifest, ds.errors)) {
    try {
      MaskSample s{e.image, e.annotation, load_image(e.image), load_mask(e.annotation)};
      if (s.mask.width() != s.image.width() || s.mask.height() != s.image.height())
        throw Error("mask size differs from image size");
      ds.samples.push_back(std::move(s));
    } catch (const std::exception& ex) {
      ds.errors.push_back({e.line, ex.what()});
    }
  }
  return ds;
}

/// Boxes from a JSON array of {left, top, right, bottom} objects.
inline std::vector<BoundingBox> parse_boxes(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw Error("box annotation must be a JSON array");
  std::vector<BoundingBox> out;
  for (const auto& b : j) {
    if (!b.is_object()) throw Error("box annotation entries must be objects");
    out.push_back({b.at("left").get<long>(), b.at("top").get<long>(), b.at("right").get<long>(),
                   b.at("bottom").get<long>(), 0.0});
  }
  return out;
}

inline std::string boxes_to_json(std::span<const BoundingBox> boxes) {
  nlohmann::json j = nlohmann::json::array();
  for (const BoundingBox& b : boxes) j.push_back({{"left", b.left}, {"top", b.top}, {"right", b.right}, {"bottom", b.bottom}});
  return j.dump();
}

inline Dataset<BoxSample> load_box_dataset(const std::filesystem::path& root, const std::filesystem::path& manifest) {
  Dataset<BoxSample> ds;
  for (const ManifestEntry& e : read_manifest(root, manifest, ds.errors)) {
    try {
      std::ifstream in(e.annotation);
      if (!in) throw Error("cannot open " + e.annotation.string());
      std::stringstream ss;
      ss << in.rdbuf();
      BoxSample s{e.image, e.annotation, load_image(e.image), parse_boxes(ss.str())};
      for (const BoundingBox& b : s.boxes)
        if (!b.within(s.image.width(), s.image.height())) throw Error("box outside the image");
      ds.samples.push_back(std::move(s));
    } catch (const std::exception& ex) {
      ds.errors.push_back({e.line, ex.what()});
    }
  }
  return ds;
}

/// Average precision, recall and their F_beta over per-image binary masks.
struct MaskSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
};

inline MaskSummary summarize_masks(std::span<const Mask> preds, std::span<const Mask> gts) {
  if (preds.size() != gts.size()) throw Error("summarize_masks: count mismatch");
  MaskSummary s;
  if (preds.empty()) return s;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto [p, r] = mask_precision_recall(preds[i], gts[i]);
    s.precision += p;
    s.recall += r;
  }
  s.precision /= static_cast<double>(preds.size());
  s.recall /= static_cast<double>(preds.size());
  s.f_beta = f_beta(s.precision, s.recall);
  return s;
}

/// Pooled precision and recall of binary masks and their F_beta.
inline MaskSummary pooled_masks(std::span<const Mask> preds, std::span<const Mask> gts) {
  if (preds.size() != gts.size()) throw Error("pooled_masks: count mismatch");
  double tp = 0.0, fp = 0.0, pos = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].width() != gts[i].width() || preds[i].height() != gts[i].height()) throw Error("mask sizes differ");
    for (std::size_t k = 0; k < preds[i].size(); ++k) {
      tp += preds[i][k] && gts[i][k];
      fp += preds[i][k] && !gts[i][k];
      pos += gts[i][k];
    }
  }
  const PRPoint p = pr_point(0, tp, fp, pos);
  return {p.precision, p.recall, f_beta(p.precision, p.recall)};
}

}  // namespace cohesion

#endif  // COHESION_EVAL_HPP
