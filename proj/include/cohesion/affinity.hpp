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

#ifndef COHESION_AFFINITY_HPP
#define COHESION_AFFINITY_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "cohesion/image.hpp"
#include "cohesion/parallel.hpp"
#include "cohesion/sparse.hpp"

namespace cohesion {

/// Positive ridge added to window covariances before inversion.
class Tau {
public:
  explicit Tau(double value) : value_(value) {
    if (!(value > 0.0)) throw Error("tau must be positive");
  }
  double value() const noexcept { return value_; }

private:
  double value_;
};

inline Eigen::Vector3d to_vec(const Rgb& p) { return {p[0], p[1], p[2]}; }

/// Color statistics of one fully interior square window.
struct WindowStats {
  std::size_t center = 0;                ///< linear index of the window center
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();           ///< biased (divide by |window|)
  Eigen::Matrix3d regularized_inverse = Eigen::Matrix3d::Zero();  ///< (covariance + tau*I)^-1
};

struct WindowStatsSet {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t radius = 1;
  double tau = 0.0;
  std::vector<WindowStats> windows;

  std::size_t side() const noexcept { return 2 * radius + 1; }
  std::size_t window_size() const noexcept { return side() * side(); }

  /// Linear index of the a-th pixel (row-major inside the window) of window w.
  std::size_t member(const WindowStats& w, std::size_t a) const noexcept {
    const PixelCoord c = unindex(w.center, width);
    return linear_index(c.row - radius + a / side(), c.col - radius + a % side(), width);
  }
};

inline Eigen::Matrix3d regularized_inverse(const Eigen::Matrix3d& covariance, double ridge) {
  Eigen::Matrix3d inv = (covariance + ridge * Eigen::Matrix3d::Identity()).inverse();
  return 0.5 * (inv + inv.transpose());
}

/// One WindowStats per window centered at rows/cols [radius, extent-radius).
/// Windows that would cross the border are not emitted.
inline WindowStatsSet compute_window_stats(const RgbImage& img, Tau tau, std::size_t radius = 1) {
  const std::size_t w = img.width(), h = img.height();
  if (radius == 0 || w < 2 * radius + 1 || h < 2 * radius + 1)
    throw Error("compute_window_stats: image smaller than one window");
  WindowStatsSet set{w, h, radius, tau.value(), {}};
  const std::size_t inner_w = w - 2 * radius, inner_h = h - 2 * radius;
  set.windows.resize(inner_w * inner_h);
  const double n = static_cast<double>(set.window_size());
  parallel_for(set.windows.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      WindowStats& ws = set.windows[k];
      ws.center = linear_index(k / inner_w + radius, k % inner_w + radius, w);
      // Accumulate relative to the first member so that a constant window
      // gives an exactly zero covariance.
      const Eigen::Vector3d shift = to_vec(img.at(set.member(ws, 0)));
      Eigen::Vector3d sum = Eigen::Vector3d::Zero();
      for (std::size_t a = 0; a < set.window_size(); ++a) sum += to_vec(img.at(set.member(ws, a))) - shift;
      const Eigen::Vector3d offset = sum / n;
      ws.mean = shift + offset;
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (std::size_t a = 0; a < set.window_size(); ++a) {
        const Eigen::Vector3d d = (to_vec(img.at(set.member(ws, a))) - shift) - offset;
        cov += d * d.transpose();
      }
      ws.covariance = cov / n;
      ws.regularized_inverse = regularized_inverse(ws.covariance, tau.value());
    }
  }, 256);
  return set;
}

/// Covariance-weighted inner product of two pixels about the window mean,
/// (p_i - mu)^T (Sigma + tau I)^-1 (p_j - mu).
inline double affinity_term(const WindowStats& stats, const Eigen::Vector3d& pi, const Eigen::Vector3d& pj) {
  return (pi - stats.mean).dot(stats.regularized_inverse * (pj - stats.mean));
}

/// Same quantity computed in the covariance eigenbasis: the centered pixels
/// are projected onto the eigenvectors and the products weighted by
/// 1/(phi_z + tau).
inline double affinity_term_eigenbasis(const Eigen::Vector3d& mean, const Eigen::Matrix3d& covariance, double tau,
                                       const Eigen::Vector3d& pi, const Eigen::Vector3d& pj) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(covariance);
  const Eigen::Vector3d qi = es.eigenvectors().transpose() * (pi - mean);
  const Eigen::Vector3d qj = es.eigenvectors().transpose() * (pj - mean);
  const Eigen::Vector3d theta = (es.eigenvalues().array().max(0.0) + tau).inverse();
  return (theta.array() * qi.array() * qj.array()).sum();
}

namespace detail {

/// Sums per-window dense blocks into a compressed-row matrix. block_fn(ws,
/// centered, a, b) returns the contribution of window ws to entry
/// (member a, member b).
template <typename BlockFn>
SparseSymMatrix assemble_windows(const RgbImage& img, const WindowStatsSet& set, BlockFn&& block_fn) {
  const std::size_t w = set.width, h = set.height, n = w * h, r = set.radius;
  const std::size_t m = set.window_size();
  const std::size_t reach = 2 * r, stencil_side = 2 * reach + 1, slots = stencil_side * stencil_side;
  const std::size_t inner_w = w - 2 * r;

  // Pass 1: dense blocks, one per window.
  std::vector<double> blocks(set.windows.size() * m * m);
  parallel_for(set.windows.size(), [&](std::size_t b, std::size_t e) {
    std::vector<Eigen::Vector3d> centered(m);
    for (std::size_t k = b; k < e; ++k) {
      const WindowStats& ws = set.windows[k];
      for (std::size_t a = 0; a < m; ++a) centered[a] = to_vec(img.at(set.member(ws, a))) - ws.mean;
      double* blk = &blocks[k * m * m];
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = a; c < m; ++c) {
          const double v = block_fn(ws, centered, a, c);
          blk[a * m + c] = v;
          blk[c * m + a] = v;
        }
    }
  }, 256);

  // Pass 2: each row gathers from the windows containing it, in ascending
  // window order, into a fixed stencil of neighbor offsets.
  std::vector<double> stencil(n * slots, 0.0);
  std::vector<std::uint8_t> touched(n * slots, 0);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const PixelCoord pi = unindex(i, w);
      const std::size_t cr0 = std::max(pi.row, r) - r, cr1 = std::min(pi.row + r, h - 1 - r);
      const std::size_t cc0 = std::max(pi.col, r) - r, cc1 = std::min(pi.col + r, w - 1 - r);
      for (std::size_t cr = std::max(cr0, r); cr <= cr1; ++cr)
        for (std::size_t cc = std::max(cc0, r); cc <= cc1; ++cc) {
          const std::size_t k = (cr - r) * inner_w + (cc - r);
          const std::size_t a = (pi.row + r - cr) * set.side() + (pi.col + r - cc);
          const double* blk = &blocks[k * m * m + a * m];
          for (std::size_t c = 0; c < m; ++c) {
            const std::size_t jr = cr - r + c / set.side(), jc = cc - r + c % set.side();
            const std::size_t slot = (jr + reach - pi.row) * stencil_side + (jc + reach - pi.col);
            stencil[i * slots + slot] += blk[c];
            touched[i * slots + slot] = 1;
          }
        }
    }
  }, 512);

  std::vector<std::size_t> row_ptr(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    row_ptr[i + 1] = row_ptr[i] + static_cast<std::size_t>(std::count(
        touched.begin() + static_cast<std::ptrdiff_t>(i * slots),
        touched.begin() + static_cast<std::ptrdiff_t>((i + 1) * slots), std::uint8_t{1}));
  std::vector<std::size_t> cols(row_ptr[n]);
  std::vector<double> vals(row_ptr[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const PixelCoord pi = unindex(i, w);
    std::size_t p = row_ptr[i];
    for (std::size_t s = 0; s < slots; ++s) {
      if (!touched[i * slots + s]) continue;
      const std::size_t jr = pi.row + s / stencil_side - reach, jc = pi.col + s % stencil_side - reach;
      cols[p] = linear_index(jr, jc, w);
      vals[p] = stencil[i * slots + s];
      ++p;
    }
  }
  return {n, std::move(row_ptr), std::move(cols), std::move(vals)};
}

}  // namespace detail

/// Unnormalized affinity: W_ij = sum over shared windows of (1 + A_E),
/// diagonal included.
inline SparseSymMatrix build_raw_affinity(const RgbImage& img, const WindowStatsSet& stats) {
  return detail::assemble_windows(img, stats,
                                  [](const WindowStats& ws, const std::vector<Eigen::Vector3d>& x, std::size_t a,
                                     std::size_t b) { return 1.0 + x[a].dot(ws.regularized_inverse * x[b]); });
}

/// Matting Laplacian with the ridge tau/|window| applied to each covariance.
inline SparseSymMatrix matting_laplacian(const RgbImage& img, const WindowStatsSet& stats) {
  const double m = static_cast<double>(stats.window_size());
  std::vector<Eigen::Matrix3d> inverses(stats.windows.size());
  for (std::size_t k = 0; k < inverses.size(); ++k)
    inverses[k] = regularized_inverse(stats.windows[k].covariance, stats.tau / m);
  const WindowStats* first = stats.windows.data();
  return detail::assemble_windows(img, stats,
                                  [&](const WindowStats& ws, const std::vector<Eigen::Vector3d>& x, std::size_t a,
                                      std::size_t b) {
                                    const Eigen::Matrix3d& inv = inverses[static_cast<std::size_t>(&ws - first)];
                                    const double delta = a == b ? 1.0 : 0.0;
                                    return delta - (1.0 + x[a].dot(inv * x[b])) / m;
                                  });
}

struct NormalizedAffinity {
  SparseSymMatrix matrix;
  std::vector<double> degree;        ///< row sums of the raw matrix
  std::size_t nonpositive_rows = 0;  ///< rows whose degree was clamped
};

inline constexpr double kDegreeFloor = 1e-10;

/// A_ij = W_ij / sqrt(D_ii D_jj) with D_ii = sum_j W_ij clamped below at 1e-10.
inline NormalizedAffinity normalize_affinity(const SparseSymMatrix& raw) {
  NormalizedAffinity out{raw, raw.row_sums(), 0};
  std::vector<double> inv_sqrt(raw.dimension());
  for (std::size_t i = 0; i < raw.dimension(); ++i) {
    if (out.degree[i] <= 0.0) ++out.nonpositive_rows;
    inv_sqrt[i] = 1.0 / std::sqrt(std::max(out.degree[i], kDegreeFloor));
  }
  const auto rp = raw.row_ptr();
  const auto cols = raw.cols();
  auto vals = out.matrix.values();
  for (std::size_t i = 0; i < raw.dimension(); ++i)
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) vals[p] *= inv_sqrt[i] * inv_sqrt[cols[p]];
  return out;
}

/// Affinity between each window's top-left and bottom-right pixels, written
/// at the top-left pixel. Cells not reached stay 0.
inline GrayMap affinity_visualization(const RgbImage& img, Tau tau, std::size_t radius = 1) {
  const WindowStatsSet set = compute_window_stats(img, tau, radius);
  GrayMap map(img.width(), img.height(), 0.0);
  const std::size_t last = set.window_size() - 1;
  for (const WindowStats& ws : set.windows) {
    const std::size_t tl = set.member(ws, 0), br = set.member(ws, last);
    map[tl] = affinity_term(ws, to_vec(img.at(tl)), to_vec(img.at(br)));
  }
  return map;
}

struct AffinityConfig {
  double tau = 1e-5;
  std::size_t radius = 1;
};

struct Affinity {
  WindowStatsSet stats;
  SparseSymMatrix raw;
  NormalizedAffinity normalized;
};

inline Affinity build_affinity(const RgbImage& img, const AffinityConfig& cfg = {}) {
  Affinity a;
  a.stats = compute_window_stats(img, Tau(cfg.tau), cfg.radius);
  a.raw = build_raw_affinity(img, a.stats);
  a.normalized = normalize_affinity(a.raw);
  return a;
}

}  // namespace cohesion

#endif  // COHESION_AFFINITY_HPP
