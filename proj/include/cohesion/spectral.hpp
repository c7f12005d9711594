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

#ifndef COHESION_SPECTRAL_HPP
#define COHESION_SPECTRAL_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cohesion/sparse.hpp"

namespace cohesion {

/// Eigenvalue (the cohesion value) and unit eigenvector.
struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  ///< ||A v - value v||
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Flips v so that its entry of largest magnitude (first one on ties) is positive.
inline void normalize_sign(std::span<double> v) {
  if (v.empty()) return;
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v[best] < 0.0)
    for (double& x : v) x = -x;
}

struct EigenOptions {
  std::size_t count = 1;
  double tol = 1e-6;
  std::size_t max_restarts = 300;
  std::size_t basis_size = 0;  ///< 0 selects max(2*count+10, 24)
  std::uint64_t seed = 42;
  /// Orthonormal vectors already known to be eigenvectors; the search runs
  /// in their orthogonal complement.
  std::vector<std::vector<double>> deflate;
};

struct EigenSolveResult {
  std::vector<EigenPair> pairs;  ///< descending by value
  std::size_t converged = 0;     ///< leading pairs meeting the tolerance
  std::size_t restarts = 0;
  std::size_t matvecs = 0;
};

class EigenNotConverged : public Error {
public:
  EigenNotConverged(std::string what, std::vector<double> residuals)
      : Error(std::move(what)), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
  std::vector<double> residuals_;
};

namespace detail {

// Removes from w its components along the deflation vectors and the first
// `cols` columns of basis (column-major, stride n). Two classical
// Gram-Schmidt sweeps; the accumulated coefficients are added to coef.
inline void orthogonalize(std::span<double> w, const std::vector<std::vector<double>>& deflate,
                          const std::vector<double>& basis, std::size_t n, std::size_t cols,
                          std::vector<double>& coef) {
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (const auto& d : deflate) {
      const double c = dot(d, w);
      for (std::size_t i = 0; i < n; ++i) w[i] -= c * d[i];
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const std::span<const double> vj(basis.data() + j * n, n);
      const double c = dot(vj, w);
      coef[j] += c;
      for (std::size_t i = 0; i < n; ++i) w[i] -= c * vj[i];
    }
  }
}

}  // namespace detail

/// Thick-restart Lanczos with full reorthogonalization for the largest
/// algebraic eigenvalues of a symmetric matrix. Returns whatever converged
/// together with the best remaining Ritz pairs; never throws on slow
/// convergence.
inline EigenSolveResult lanczos_largest(const SparseSymMatrix& a, const EigenOptions& opt) {
  const std::size_t n = a.dimension();
  const std::size_t free_dim = n - std::min(n, opt.deflate.size());
  if (opt.count == 0) throw Error("top_eigenpairs: count must be positive");
  if (opt.count > free_dim) throw Error("top_eigenpairs: count exceeds matrix dimension");
  for (const auto& d : opt.deflate)
    if (d.size() != n) throw Error("top_eigenpairs: deflation vector has wrong length");

  const std::size_t m = std::min(free_dim, opt.basis_size ? opt.basis_size : std::max<std::size_t>(2 * opt.count + 10, 24));
  const std::size_t keep_target = std::min(m - 1, std::max(opt.count + 1, (m + opt.count) / 2));

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> basis(n * (m + 1), 0.0);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> w(n), coef(m + 1);

  EigenSolveResult result;

  // Writes a fresh random unit vector orthogonal to everything into column j.
  // Returns false when the free space is exhausted.
  auto random_column = [&](std::size_t j) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      std::span<double> col(basis.data() + j * n, n);
      for (double& x : col) x = gauss(rng);
      std::fill(coef.begin(), coef.end(), 0.0);
      detail::orthogonalize(col, opt.deflate, basis, n, j, coef);
      const double nv = norm(col);
      if (nv > 1e-8) {
        for (double& x : col) x /= nv;
        return true;
      }
    }
    return false;
  };

  if (!random_column(0)) throw Error("top_eigenpairs: no free direction to start from");

  std::size_t kept = 0;  // leading columns that are Ritz vectors from the last restart
  std::size_t active = m;
  Eigen::VectorXd ritz;
  Eigen::MatrixXd ritz_vec;
  double tail_beta = 0.0;

  for (std::size_t restart = 0;; ++restart) {
    // Expand the basis from column `kept` up to `active` columns.
    tail_beta = 0.0;
    for (std::size_t j = kept; j < active; ++j) {
      const std::span<const double> vj(basis.data() + j * n, n);
      a.multiply(vj, w);
      ++result.matvecs;
      std::fill(coef.begin(), coef.end(), 0.0);
      detail::orthogonalize(w, opt.deflate, basis, n, j + 1, coef);
      for (std::size_t i = 0; i <= j; ++i) {
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = coef[i];
        proj(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = coef[i];
      }
      const double beta = norm(w);
      std::span<double> next(basis.data() + (j + 1) * n, n);
      const double scale = std::max(1.0, std::abs(coef[j]));
      if (beta > 1e-12 * scale) {
        for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / beta;
        if (j + 1 == active) tail_beta = beta;
      } else if (j + 1 < active) {
        // Invariant subspace found; continue in a fresh direction.
        if (!random_column(j + 1)) {
          active = j + 1;
          break;
        }
      }
    }

    const auto am = static_cast<Eigen::Index>(active);
    const Eigen::MatrixXd t = proj.topLeftCorner(am, am);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()));
    ritz = es.eigenvalues().reverse();
    ritz_vec = es.eigenvectors().rowwise().reverse();

    std::size_t converged = 0;
    for (std::size_t i = 0; i < opt.count; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double est = std::abs(tail_beta * ritz_vec(am - 1, ii));
      if (est <= opt.tol * std::max(std::abs(ritz(ii)), 1.0)) {
        ++converged;
      } else {
        break;
      }
    }
    result.restarts = restart;
    const bool exhausted = active < m || active == free_dim;
    if (converged == opt.count || exhausted || restart >= opt.max_restarts) break;

    // Thick restart: keep the leading Ritz vectors and the residual direction.
    const std::size_t keep = std::min(keep_target, active - 1);
    std::vector<double> fresh(n * keep, 0.0);
    for (std::size_t r = 0; r < keep; ++r)
      for (std::size_t j = 0; j < active; ++j) {
        const double s = ritz_vec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(r));
        const double* vj = basis.data() + j * n;
        double* dst = fresh.data() + r * n;
        for (std::size_t i = 0; i < n; ++i) dst[i] += s * vj[i];
      }
    std::copy(basis.begin() + static_cast<std::ptrdiff_t>(active * n),
              basis.begin() + static_cast<std::ptrdiff_t>((active + 1) * n),
              basis.begin() + static_cast<std::ptrdiff_t>(keep * n));
    std::copy(fresh.begin(), fresh.end(), basis.begin());
    proj.setZero();
    for (std::size_t r = 0; r < keep; ++r)
      proj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = ritz(static_cast<Eigen::Index>(r));
    kept = keep;
  }

  // Ritz vectors and explicit residuals.
  const std::size_t take = std::min<std::size_t>(opt.count, active);
  std::vector<double> av(n);
  for (std::size_t r = 0; r < take; ++r) {
    EigenPair p;
    p.vector.assign(n, 0.0);
    for (std::size_t j = 0; j < active; ++j) {
      const double s = ritz_vec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(r));
      const double* vj = basis.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) p.vector[i] += s * vj[i];
    }
    const double nv = norm(p.vector);
    for (double& x : p.vector) x /= nv;
    normalize_sign(p.vector);
    a.multiply(p.vector, av);
    ++result.matvecs;
    p.value = dot(p.vector, av);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (av[i] - p.value * p.vector[i]) * (av[i] - p.value * p.vector[i]);
    p.residual = std::sqrt(res);
    result.pairs.push_back(std::move(p));
  }
  result.converged = 0;
  for (const auto& p : result.pairs) {
    if (p.residual > opt.tol * std::max(std::abs(p.value), 1.0)) break;
    ++result.converged;
  }
  return result;
}

/// The `count` eigenpairs of largest algebraic eigenvalue, sorted
/// descending. Throws EigenNotConverged (carrying achieved residuals) when
/// any requested pair misses the tolerance.
inline std::vector<EigenPair> top_eigenpairs(const SparseSymMatrix& a, const EigenOptions& opt) {
  EigenSolveResult r = lanczos_largest(a, opt);
  if (r.converged < opt.count) {
    std::vector<double> res;
    for (const auto& p : r.pairs) res.push_back(p.residual);
    throw EigenNotConverged("top_eigenpairs: " + std::to_string(r.converged) + " of " + std::to_string(opt.count) +
                                " eigenpairs converged",
                            std::move(res));
  }
  return std::move(r.pairs);
}

inline std::vector<EigenPair> top_eigenpairs(const SparseSymMatrix& a, std::size_t count, double tol = 1e-6,
                                             std::size_t max_iter = 300) {
  EigenOptions opt;
  opt.count = count;
  opt.tol = tol;
  opt.max_restarts = max_iter;
  return top_eigenpairs(a, opt);
}

/// v^T A v / v^T v.
inline double rayleigh_quotient(const SparseSymMatrix& a, std::span<const double> v) {
  if (v.size() != a.dimension()) throw Error("rayleigh_quotient: length mismatch");
  const double vv = dot(v, v);
  if (vv == 0.0) throw Error("rayleigh_quotient: zero vector");
  return dot(v, a.multiply(v)) / vv;
}

/// The rank-one kernel l l^T, never materialized.
struct RankOne {
  std::span<const double> v;
};

namespace detail {
inline double alignment_ratio(double cross, double self1, double self2) {
  if (self1 <= 0.0 || self2 <= 0.0) throw Error("kernel_alignment: zero-norm argument");
  return cross / std::sqrt(self1 * self2);
}
}  // namespace detail

/// Normalized Frobenius inner product <K1,K2> / sqrt(<K1,K1><K2,K2>).
inline double kernel_alignment(const SparseSymMatrix& k1, const SparseSymMatrix& k2) {
  return detail::alignment_ratio(k1.frobenius_dot(k2), k1.frobenius_dot(k1), k2.frobenius_dot(k2));
}

/// <A, l l^T> = l^T A l and <l l^T, l l^T> = (l^T l)^2.
inline double kernel_alignment(const SparseSymMatrix& k, RankOne l) {
  if (l.v.size() != k.dimension()) throw Error("kernel_alignment: dimension mismatch");
  const double ll = dot(l.v, l.v);
  return detail::alignment_ratio(dot(l.v, k.multiply(l.v)), k.frobenius_dot(k), ll * ll);
}

inline double kernel_alignment(RankOne l, const SparseSymMatrix& k) { return kernel_alignment(k, l); }

inline double kernel_alignment(RankOne a, RankOne b) {
  if (a.v.size() != b.v.size()) throw Error("kernel_alignment: dimension mismatch");
  const double ab = dot(a.v, b.v), aa = dot(a.v, a.v), bb = dot(b.v, b.v);
  return detail::alignment_ratio(ab * ab, aa * aa, bb * bb);
}

/// Pairwise labels on the stored pattern: +1 where A_ij > delta, else -1.
inline SparseSymMatrix threshold_labels(const SparseSymMatrix& a, double delta) {
  SparseSymMatrix m = a;
  for (double& v : m.values()) v = v > delta ? 1.0 : -1.0;
  return m;
}

}  // namespace cohesion

#endif  // COHESION_SPECTRAL_HPP
