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

#include <random>

#include "cohesion/config.hpp"

using namespace cohesion;

namespace {

RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RunConfig rc;
  rc.command = rng() % 2 ? "saliency" : "eval-proposals";
  for (std::uint64_t i = rng() % 4; i > 0; --i) rc.inputs.push_back("img_" + std::to_string(rng() % 1000) + ".png");
  rc.output = "out/" + std::to_string(rng());
  rc.seed = rng();
  rc.threads = rng() % 16;
  rc.resize_width = rng() % 400;
  rc.crop_borders = rng() % 2;
  rc.tau = u(rng) * 1e-3;
  rc.window_radius = 1 + rng() % 3;
  rc.eigs = 1 + rng() % 100;
  rc.eigen_tol = u(rng) * 1e-5;
  rc.max_restarts = rng() % 1000;
  rc.noise_elimination = rng() % 2;
  rc.superpixels = rng() % 500;
  rc.compactness = u(rng) * 50.0;
  rc.sigma_p = u(rng);
  rc.sigma_c = u(rng) / 3.0;
  rc.k = u(rng) * 10.0;
  rc.morph = rng() % 2;
  rc.threshold = rng() % 2 ? "otsu" : "0.25";
  rc.pairwise = rng() % 10;
  rc.canny_low = u(rng) * 50.0;
  rc.canny_high = rc.canny_low + u(rng) * 50.0;
  rc.max_boxes = rng() % 200;
  rc.score_map = rng() % 2 ? "e1" : "per-source";
  rc.per_image = rng() % 2;
  rc.root = "data/" + std::to_string(rng() % 7);
  rc.scene = rng() % 2 ? "" : "fig4";
  return rc;
}

}  // namespace

TEST(RunConfig, RoundTripsThroughJson) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const RunConfig rc = random_config(rng);
    const nlohmann::json j = rc;
    EXPECT_EQ(j.get<RunConfig>(), rc);
    EXPECT_EQ(nlohmann::json::parse(j.dump()).get<RunConfig>(), rc);
  }
}

TEST(RunConfig, MissingFieldsTakeDefaults) {
  const auto rc = nlohmann::json::parse(R"({"command":"saliency","eigs":3})").get<RunConfig>();
  EXPECT_EQ(rc.eigs, 3u);
  EXPECT_EQ(rc.seed, 42u);
  EXPECT_EQ(rc.superpixels, 150u);
  EXPECT_EQ(rc.threshold, "otsu");
}

TEST(RunConfig, MapsOntoModuleConfigs) {
  RunConfig rc;
  rc.tau = 2e-5;
  rc.seed = 9;
  rc.eigs = 12;
  rc.pairwise = 4;
  rc.threshold = "0.4";
  rc.canny_low = 10.0;
  rc.canny_high = 30.0;
  rc.score_map = "e1";
  const SaliencyConfig s = saliency_config(rc);
  EXPECT_EQ(s.discovery.affinity.tau, 2e-5);
  EXPECT_EQ(s.discovery.seed, 9u);
  EXPECT_EQ(s.eigenvectors, 12u);
  ASSERT_TRUE(s.threshold.has_value());
  EXPECT_EQ(*s.threshold, 0.4);
  const ProposalConfig p = proposal_config(rc);
  EXPECT_EQ(p.n_single, 12u);
  EXPECT_EQ(p.n_pairwise, 4u);
  EXPECT_EQ(p.canny.low, 10.0);
  EXPECT_EQ(p.canny.high, 30.0);
  EXPECT_EQ(p.score_map, ScoreMap::e1);
}

TEST(RunConfig, ThresholdParsing) {
  EXPECT_FALSE(parse_threshold("otsu").has_value());
  EXPECT_EQ(*parse_threshold("0"), 0.0);
  EXPECT_EQ(*parse_threshold("1"), 1.0);
  for (const char* bad : {"", "1.5", "-0.1", "abc", "0.5x"}) EXPECT_THROW(parse_threshold(bad), Error) << bad;
}
