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

#ifndef COHESION_CONFIG_HPP
#define COHESION_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohesion/proposals.hpp"
#include "cohesion/saliency.hpp"

namespace cohesion {

/// Every effective parameter of one command-line run. Serializes to JSON
/// and back without loss.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 42;
  std::size_t threads = 0;  ///< 0 means hardware concurrency
  std::size_t resize_width = 200;  ///< 0 keeps the input size
  bool crop_borders = false;

  double tau = 1e-5;
  std::size_t window_radius = 1;
  std::size_t eigs = 2;
  double eigen_tol = 1e-6;
  std::size_t max_restarts = 300;

  bool noise_elimination = true;
  std::size_t superpixels = 150;
  double compactness = 20.0;
  double sigma_p = 0.25;
  double sigma_c = 20.0 / 255.0;
  double k = 6.0;
  bool morph = false;
  std::string threshold = "otsu";

  std::size_t pairwise = 6;
  double canny_low = 25.5;
  double canny_high = 51.0;
  std::size_t max_boxes = 0;
  std::string score_map = "e1e2";

  bool per_image = false;
  std::string root;
  std::string scene;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, command, inputs, output, seed, threads, resize_width,
                                                crop_borders, tau, window_radius, eigs, eigen_tol, max_restarts,
                                                noise_elimination, superpixels, compactness, sigma_p, sigma_c, k,
                                                morph, threshold, pairwise, canny_low, canny_high, max_boxes,
                                                score_map, per_image, root, scene)

inline DiscoveryConfig discovery_config(const RunConfig& rc) {
  DiscoveryConfig d;
  d.affinity.tau = rc.tau;
  d.affinity.radius = rc.window_radius;
  d.eigen_tol = rc.eigen_tol;
  d.max_restarts = rc.max_restarts;
  d.seed = rc.seed;
  return d;
}

/// Fixed threshold in [0,1], or empty for Otsu.
inline std::optional<double> parse_threshold(const std::string& s) {
  if (s == "otsu") return std::nullopt;
  std::size_t used = 0;
  double t = 0.0;
  try {
    t = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !(t >= 0.0 && t <= 1.0)) throw Error("threshold must be 'otsu' or a number in [0,1]");
  return t;
}

inline SaliencyConfig saliency_config(const RunConfig& rc) {
  SaliencyConfig s;
  s.discovery = discovery_config(rc);
  s.eigenvectors = rc.eigs;
  s.eliminate_noise = rc.noise_elimination;
  s.superpixels.target = rc.superpixels;
  s.superpixels.compactness = rc.compactness;
  s.sigma_p = rc.sigma_p;
  s.sigma_c = rc.sigma_c;
  s.k = rc.k;
  s.morph = rc.morph;
  s.threshold = parse_threshold(rc.threshold);
  return s;
}

inline ProposalConfig proposal_config(const RunConfig& rc) {
  ProposalConfig p;
  p.discovery = discovery_config(rc);
  p.n_single = rc.eigs;
  p.n_pairwise = rc.pairwise;
  p.canny.low = rc.canny_low;
  p.canny.high = rc.canny_high;
  p.objectness.sigma_p = rc.sigma_p;
  p.objectness.sigma_c = rc.sigma_c;
  p.objectness.k = rc.k;
  p.score_map = parse_score_map(rc.score_map);
  p.max_boxes = rc.max_boxes;
  return p;
}

}  // namespace cohesion

#endif  // COHESION_CONFIG_HPP
