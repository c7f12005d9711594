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

#include <gtest/gtest.h>

#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "cohesion/saliency.hpp"
#include "cohesion/synth.hpp"

using namespace cohesion;

namespace {

SuperpixelElement element(double row, double col, double intensity, std::size_t id = 0) {
  SuperpixelElement e;
  e.id = id;
  e.centroid_row = row;
  e.centroid_col = col;
  e.mean_intensity = intensity;
  return e;
}

// Partition and 4-connectivity checks.
void expect_valid_partition(const std::vector<SuperpixelElement>& els, std::size_t w, std::size_t h) {
  std::vector<int> owner(w * h, -1);
  for (std::size_t e = 0; e < els.size(); ++e) {
    ASSERT_FALSE(els[e].members.empty());
    for (std::size_t i : els[e].members) {
      ASSERT_EQ(owner[i], -1) << "pixel in two elements";
      owner[i] = static_cast<int>(e);
    }
  }
  for (int o : owner) ASSERT_NE(o, -1) << "pixel in no element";
  for (std::size_t e = 0; e < els.size(); ++e) {
    std::vector<std::size_t> stack{els[e].members[0]};
    std::set<std::size_t> seen{els[e].members[0]};
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const PixelCoord p = unindex(i, w);
      const long nb[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
      for (const auto& d : nb) {
        const long r = static_cast<long>(p.row) + d[0], c = static_cast<long>(p.col) + d[1];
        if (r < 0 || c < 0 || r >= static_cast<long>(h) || c >= static_cast<long>(w)) continue;
        const std::size_t j = static_cast<std::size_t>(r) * w + static_cast<std::size_t>(c);
        if (owner[j] == static_cast<int>(e) && seen.insert(j).second) stack.push_back(j);
      }
    }
    EXPECT_EQ(seen.size(), els[e].members.size()) << "element " << e << " not 4-connected";
  }
}

GrayMap random_blob_map(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayMap m(w, h);
  const double cr = u(rng) * static_cast<double>(h), cc = u(rng) * static_cast<double>(w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const double d = std::hypot(static_cast<double>(r) - cr, static_cast<double>(c) - cc);
      m.at(r, c) = std::clamp(255.0 * std::exp(-d / 15.0) + 30.0 * u(rng), 0.0, 255.0);
    }
  return m;
}

}  // namespace

TEST(Superpixels, ConstantMapFollowsGrid) {
  SuperpixelConfig cfg;
  cfg.target = 4;
  const auto els = segment_superpixels(GrayMap(20, 20, 100.0), 255.0, cfg);
  ASSERT_EQ(els.size(), 4u);
  for (const auto& e : els) {
    EXPECT_EQ(e.members.size(), 100u);
    // Rectangular: members fill their bounding box.
    std::size_t r0 = 99, r1 = 0, c0 = 99, c1 = 0;
    for (std::size_t i : e.members) {
      r0 = std::min(r0, i / 20);
      r1 = std::max(r1, i / 20);
      c0 = std::min(c0, i % 20);
      c1 = std::max(c1, i % 20);
    }
    EXPECT_EQ((r1 - r0 + 1) * (c1 - c0 + 1), e.members.size());
  }
  expect_valid_partition(els, 20, 20);
}

TEST(Superpixels, BipartiteMapRespectsBoundary) {
  GrayMap m(60, 40);
  for (std::size_t r = 0; r < 40; ++r)
    for (std::size_t c = 30; c < 60; ++c) m.at(r, c) = 255.0;
  SuperpixelConfig cfg;
  cfg.target = 24;
  const auto els = segment_superpixels(m, 255.0, cfg);
  expect_valid_partition(els, 60, 40);
  std::size_t straddling = 0;
  for (const auto& e : els) {
    std::size_t left = 0;
    for (std::size_t i : e.members) left += i % 60 < 30;
    straddling += std::min(left, e.members.size() - left);
  }
  EXPECT_LE(static_cast<double>(straddling), 0.01 * 2400.0);
}

TEST(Superpixels, CountWithinBoundsAndValidPartition) {
  const auto els = segment_superpixels(random_blob_map(200, 150, 1), 255.0);
  EXPECT_GE(els.size(), 75u);
  EXPECT_LE(els.size(), 225u);
  expect_valid_partition(els, 200, 150);
  for (std::uint64_t seed = 2; seed < 8; ++seed) {
    SuperpixelConfig cfg;
    cfg.target = 20 + seed * 7;
    const std::size_t w = 30 + seed * 5, h = 25 + seed * 3;
    const auto more = segment_superpixels(random_blob_map(w, h, seed), 255.0, cfg);
    EXPECT_GE(static_cast<double>(more.size()), 0.5 * static_cast<double>(cfg.target));
    EXPECT_LE(static_cast<double>(more.size()), 1.5 * static_cast<double>(cfg.target));
    expect_valid_partition(more, w, h);
  }
}

TEST(Superpixels, TooSmallMapThrows) {
  SuperpixelConfig cfg;
  cfg.target = 150;
  EXPECT_THROW(segment_superpixels(GrayMap(10, 10), 255.0, cfg), Error);
}

TEST(Uniqueness, EqualIntensitiesGiveZero) {
  std::vector<SuperpixelElement> els;
  for (int i = 0; i < 6; ++i) els.push_back(element(0.1 * i, 0.2 * (i % 3), 0.4));
  for (double u : element_uniqueness(els, 0.25)) EXPECT_EQ(u, 0.0);
}

TEST(Uniqueness, BrightOutlierIsMostUnique) {
  std::vector<SuperpixelElement> els;
  for (int i = 0; i < 9; ++i) els.push_back(element(0.1 + 0.35 * (i / 3), 0.1 + 0.35 * (i % 3), i == 4 ? 0.9 : 0.1));
  const auto u = element_uniqueness(els, 0.25);
  for (std::size_t i = 0; i < 9; ++i)
    if (i != 4) {
      EXPECT_GT(u[4], u[i]);
    }
}

TEST(Uniqueness, UniformWeightsHandComputation) {
  const std::vector<SuperpixelElement> els{element(0.1, 0.1, 0.2), element(0.5, 0.9, 0.5), element(0.9, 0.3, 0.9)};
  const auto u = element_uniqueness(els, std::numeric_limits<double>::infinity());
  const double c[3] = {0.2, 0.5, 0.9};
  for (std::size_t i = 0; i < 3; ++i) {
    double expect = 0.0;
    for (std::size_t j = 0; j < 3; ++j) expect += (c[i] - c[j]) * (c[i] - c[j]) / 3.0;
    EXPECT_NEAR(u[i], expect, 1e-15);
  }
}

TEST(Distribution, UniqueIntensityHasZeroSpread) {
  std::vector<SuperpixelElement> els{element(0.2, 0.2, 0.1), element(0.8, 0.8, 0.1), element(0.5, 0.1, 0.95)};
  EXPECT_NEAR(element_distribution(els, 20.0 / 255.0)[2], 0.0, 1e-12);
}

TEST(Distribution, ScatteredPairSpreadsMore) {
  const std::vector<SuperpixelElement> els{element(0.05, 0.05, 0.9), element(0.95, 0.95, 0.9),
                                           element(0.5, 0.45, 0.1), element(0.5, 0.55, 0.1)};
  const auto d = element_distribution(els, 20.0 / 255.0);
  EXPECT_NEAR(d[0], d[1], 1e-12);
  EXPECT_GT(d[0], 10.0 * d[2]);
  EXPECT_GT(d[1], 10.0 * d[3]);
}

TEST(Distribution, EqualIntensityBallGivesLayoutVariance) {
  std::vector<SuperpixelElement> els;
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < 8; ++k) els.push_back(element(0.5 + 0.3 * std::sin(k * pi / 4), 0.5 + 0.3 * std::cos(k * pi / 4), 0.6));
  els.push_back(element(0.5, 0.5, 0.6));
  double mr = 0.0, mc = 0.0;
  for (const auto& e : els) {
    mr += e.centroid_row / 9.0;
    mc += e.centroid_col / 9.0;
  }
  double var = 0.0;
  for (const auto& e : els) var += ((e.centroid_row - mr) * (e.centroid_row - mr) + (e.centroid_col - mc) * (e.centroid_col - mc)) / 9.0;
  for (double d : element_distribution(els, 20.0 / 255.0)) EXPECT_NEAR(d, var, 1e-14);
}

TEST(Scores, PermutationInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SuperpixelElement> els;
  for (int i = 0; i < 12; ++i) els.push_back(element(u(rng), u(rng), u(rng)));
  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<SuperpixelElement> shuffled;
  for (std::size_t p : perm) shuffled.push_back(els[p]);
  const auto u1 = element_uniqueness(els, 0.25), u2 = element_uniqueness(shuffled, 0.25);
  const auto d1 = element_distribution(els, 0.08), d2 = element_distribution(shuffled, 0.08);
  const auto s1 = combine_uniqueness_distribution(u1, d1, 6.0), s2 = combine_uniqueness_distribution(u2, d2, 6.0);
  for (std::size_t k = 0; k < 12; ++k) {
    EXPECT_NEAR(u2[k], u1[perm[k]], 1e-14);
    EXPECT_NEAR(d2[k], d1[perm[k]], 1e-14);
    EXPECT_NEAR(s2[k], s1[perm[k]], 1e-14);
  }
}

TEST(AssignSaliency, SingleElementIsConstant) {
  SuperpixelElement e = element(0.5, 0.5, 0.3);
  for (std::size_t i = 0; i < 12; ++i) e.members.push_back(i);
  const SaliencyMap s = assign_saliency({e}, {0.0}, {0.0}, 6.0, 4, 3);
  for (double v : s.map.values()) EXPECT_EQ(v, 1.0);
}

TEST(AssignSaliency, ZeroExponentGivesRescaledUniqueness) {
  const std::vector<double> u{0.1, 0.4, 0.25, 0.7}, d{0.3, 0.1, 0.9, 0.2};
  const auto s = combine_uniqueness_distribution(u, d, 0.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s[i], (u[i] - 0.1) / 0.6);
}

TEST(AssignSaliency, MonotoneInUniquenessAndDistribution) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> u(8), d(8);
    for (auto& x : u) x = g(rng);
    for (auto& x : d) x = g(rng);
    // Pin the extremes so perturbing element 3 does not move the rescale.
    u[0] = 0.0, u[1] = 1.0, d[0] = 0.0, d[1] = 1.0;
    const auto base = combine_uniqueness_distribution(u, d, 6.0);
    auto up = u;
    up[3] = std::min(1.0, up[3] + 0.1);
    EXPECT_GE(combine_uniqueness_distribution(up, d, 6.0)[3], base[3]);
    auto dn = d;
    dn[3] = std::min(1.0, dn[3] + 0.1);
    EXPECT_LE(combine_uniqueness_distribution(u, dn, 6.0)[3], base[3]);
  }
}

TEST(AssignSaliency, CompactBlobBeatsScatteredSpeckle) {
  // Object map: a bright compact blob plus dim scattered speckles.
  const std::size_t w = 120, h = 90;
  GrayMap m(w, h, 0.0);
  Mask blob(w, h), speckle(w, h);
  for (std::size_t r = 30; r < 60; ++r)
    for (std::size_t c = 45; c < 80; ++c) {
      m.at(r, c) = 230.0;
      blob.set(r, c, true);
    }
  std::mt19937_64 rng(3);
  for (int k = 0; k < 14; ++k) {
    const std::size_t r = rng() % (h - 6), c = rng() % (w - 6);
    if (r + 6 > 25 && r < 65 && c + 6 > 40 && c < 85) continue;
    for (std::size_t dr = 0; dr < 6; ++dr)
      for (std::size_t dc = 0; dc < 6; ++dc) {
        m.at(r + dr, c + dc) = 70.0;
        speckle.set(r + dr, c + dc, true);
      }
  }
  ASSERT_GT(speckle.count(), 0u);
  const ObjectMap om{m, 255.0, {1, 2}};
  const SaliencyMap s = eliminate_noise(om, SaliencyConfig{});
  double sb = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sb += blob[i] ? s.map[i] : 0.0;
    ss += speckle[i] ? s.map[i] : 0.0;
  }
  sb /= static_cast<double>(blob.count());
  ss /= static_cast<double>(speckle.count());
  EXPECT_GE(sb, 2.0 * ss);
  for (double v : s.map.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ThresholdMap, VacuousThresholds) {
  GrayMap m(5, 5);
  for (std::size_t i = 0; i < 25; ++i) m[i] = 10.0 + static_cast<double>(i);
  EXPECT_EQ(threshold_map(m, 9.0).count(), 25u);
  EXPECT_EQ(threshold_map(m, 35.0).count(), 0u);
}

TEST(ThresholdMap, MonotoneInThreshold) {
  std::mt19937_64 rng(1);
  GrayMap m(16, 16);
  for (double& v : m.values()) v = static_cast<double>(rng() % 256);
  for (bool morph : {false, true})
    for (int t1 = 0; t1 < 255; t1 += 17)
      for (int t2 = t1; t2 < 256; t2 += 23) {
        const Mask a = threshold_map(m, t1, morph), b = threshold_map(m, t2, morph);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(!b[i] || a[i]);
      }
}

TEST(ThresholdMap, OtsuRecoversPlantedBimodalRegion) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> lo(60.0, 12.0), hi(190.0, 12.0);
  GrayMap m(64, 48);
  Mask truth(64, 48);
  for (std::size_t r = 0; r < 48; ++r)
    for (std::size_t c = 0; c < 64; ++c) {
      const bool in = std::hypot(static_cast<double>(r) - 24.0, static_cast<double>(c) - 30.0) < 14.0;
      truth.set(r, c, in);
      m.at(r, c) = std::clamp(in ? hi(rng) : lo(rng), 0.0, 255.0);
    }
  const double t = otsu_threshold(m, 0.0, 255.0);
  EXPECT_GE(mask_iou(threshold_map(m, t), truth), 0.95);
}

TEST(ThresholdMap, OpeningRemovesIsolatedPixels) {
  GrayMap m(10, 10);
  m.at(1, 1) = 1.0;
  for (std::size_t r = 4; r < 8; ++r)
    for (std::size_t c = 4; c < 8; ++c) m.at(r, c) = 1.0;
  const Mask opened = threshold_map(m, 0.5, true);
  EXPECT_FALSE(opened.at(1, 1));
  EXPECT_EQ(opened.count(), 16u);
}

TEST(DetectSalient, GradientRectangle) {
  const Scene s = scene_gradient_rectangles(100);
  EXPECT_GE(mask_iou(detect_salient(s.image).mask, s.mask), 0.9);
}

TEST(DetectSalient, SolidDisk) {
  const Scene s = scene_disk(100);
  EXPECT_GE(mask_iou(detect_salient(s.image).mask, s.mask), 0.95);
}

TEST(DetectSalient, LowContrastObjectWithContour) {
  const Scene s = scene_low_contrast(100);
  EXPECT_GE(mask_iou(detect_salient(s.image).mask, s.mask), 0.6);
}

TEST(DetectSalient, OutputsAndFlags) {
  const Scene s = scene_disk(60);
  SaliencyConfig cfg;
  cfg.eliminate_noise = false;
  cfg.threshold = 0.5;
  const SalientResult r = detect_salient(s.image, cfg);
  EXPECT_EQ(r.maps.size(), 2u);
  EXPECT_EQ(r.combined.label(), "e1+e2");
  EXPECT_EQ(r.threshold, 0.5);
  for (double v : r.saliency.map.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  cfg.eigenvectors = 0;
  EXPECT_THROW(detect_salient(s.image, cfg), Error);
}
