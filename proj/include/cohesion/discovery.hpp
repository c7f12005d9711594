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

#ifndef COHESION_DISCOVERY_HPP
#define COHESION_DISCOVERY_HPP

#include <cmath>
#include <vector>

#include "cohesion/affinity.hpp"
#include "cohesion/object_maps.hpp"
#include "cohesion/spectral.hpp"

namespace cohesion {

struct DiscoveryConfig {
  AffinityConfig affinity;
  double eigen_tol = 1e-6;
  std::size_t max_restarts = 300;
  std::size_t basis_size = 0;
  std::uint64_t seed = 42;
};

/// Affinity of an image together with its leading eigenpairs.
///
/// Every row of the raw affinity sums to D_ii, so sqrt(D) is an exact
/// eigenvector of the normalized matrix with eigenvalue 1, and no other
/// eigenvalue exceeds it (the raw matrix is D minus a scaled matting
/// Laplacian, which is positive semidefinite). That vector only encodes how
/// many windows cover each pixel. It is split off as `degree_mode` and the
/// remaining pairs are searched in its orthogonal complement, so `pairs[0]`
/// is the first eigenvector that carries region information.
struct Discovery {
  Affinity affinity;
  EigenPair degree_mode;
  EigenSolveResult solve;

  std::size_t width() const noexcept { return affinity.stats.width; }
  std::size_t height() const noexcept { return affinity.stats.height; }
  const std::vector<EigenPair>& pairs() const noexcept { return solve.pairs; }

  /// Object map of the rank-th (1-based) discovered eigenvector.
  ObjectMap map(std::size_t rank, double scale = kMapScale) const {
    return eigenvector_to_map(solve.pairs.at(rank - 1).vector, width(), height(), scale, rank);
  }
};

inline EigenPair degree_mode(const NormalizedAffinity& a) {
  EigenPair p;
  p.vector.resize(a.degree.size());
  for (std::size_t i = 0; i < p.vector.size(); ++i) p.vector[i] = std::sqrt(std::max(a.degree[i], kDegreeFloor));
  const double nv = norm(p.vector);
  for (double& x : p.vector) x /= nv;
  const std::vector<double> av = a.matrix.multiply(p.vector);
  p.value = dot(p.vector, av);
  double res = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) res += (av[i] - p.value * p.vector[i]) * (av[i] - p.value * p.vector[i]);
  p.residual = std::sqrt(res);
  return p;
}

/// Builds the affinity and extracts up to `count` region eigenpairs. Pairs
/// that did not reach the tolerance are still returned; check
/// `solve.converged`.
inline Discovery discover(const RgbImage& img, std::size_t count, const DiscoveryConfig& cfg = {}) {
  Discovery d;
  d.affinity = build_affinity(img, cfg.affinity);
  d.degree_mode = degree_mode(d.affinity.normalized);
  EigenOptions opt;
  opt.count = std::min(count, img.pixel_count() - 1);
  opt.tol = cfg.eigen_tol;
  opt.max_restarts = cfg.max_restarts;
  opt.basis_size = cfg.basis_size;
  opt.seed = cfg.seed;
  opt.deflate.push_back(d.degree_mode.vector);
  d.solve = lanczos_largest(d.affinity.normalized.matrix, opt);
  return d;
}

}  // namespace cohesion

#endif  // COHESION_DISCOVERY_HPP
