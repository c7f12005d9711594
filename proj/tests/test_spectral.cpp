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
#include <random>

#include "cohesion/discovery.hpp"
#include "cohesion/synth.hpp"
#include "oracle/dense_jacobi.hpp"
#include "support.hpp"

using namespace cohesion;
using testing_support::blocky_image;
using testing_support::flat_dense;
using testing_support::random_image;

namespace {

double abs_cos(std::span<const double> a, std::span<const double> b) {
  return std::abs(dot(a, b)) / (norm(a) * norm(b));
}

std::vector<double> random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  const double s = norm(v);
  for (double& x : v) x /= s;
  return v;
}

SparseSymMatrix negated(SparseSymMatrix m) {
  for (double& v : m.values()) v = -v;
  return m;
}

}  // namespace

TEST(Jacobi, OracleSelfCheck) {
  // The oracle must itself produce orthonormal eigenvectors with tiny residuals.
  const auto A = build_affinity(random_image(6, 6, 3)).normalized.matrix;
  const auto dense = flat_dense(A);
  const auto eig = oracle::jacobi_eigen(dense, 36);
  for (std::size_t k = 0; k < 36; ++k) {
    const auto av = A.multiply(eig.vectors[k]);
    double res = 0.0;
    for (std::size_t i = 0; i < 36; ++i) res = std::max(res, std::abs(av[i] - eig.values[k] * eig.vectors[k][i]));
    EXPECT_LE(res, 1e-12);
    EXPECT_NEAR(norm(eig.vectors[k]), 1.0, 1e-12);
    for (std::size_t j = 0; j < k; ++j) EXPECT_LE(std::abs(dot(eig.vectors[j], eig.vectors[k])), 1e-12);
  }
  EXPECT_TRUE(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
}

TEST(TopEigenpairs, TwoByTwoHandCase) {
  const auto A = SparseSymMatrix::from_dense({{0, 1}, {1, 0}});
  const auto top = top_eigenpairs(A, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_NEAR(top[0].value, 1.0, 1e-12);
  EXPECT_NEAR(top[0].vector[0], 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(top[0].vector[1], 1.0 / std::sqrt(2.0), 1e-10);
  const auto both = top_eigenpairs(A, 2);
  EXPECT_NEAR(both[1].value, -1.0, 1e-12);
}

TEST(TopEigenpairs, CountAboveDimensionThrows) {
  const auto A = SparseSymMatrix::from_dense({{0, 1}, {1, 0}});
  EXPECT_THROW(top_eigenpairs(A, 3), Error);
  EXPECT_THROW(top_eigenpairs(A, 0), Error);
}

TEST(TopEigenpairs, MatchesDenseOracleOn12x12) {
  const RgbImage img = random_image(12, 12, 2024);
  const auto A = build_affinity(img).normalized.matrix;
  const auto ref = oracle::jacobi_eigen(flat_dense(A), 144);
  const auto top = top_eigenpairs(A, 6, 1e-10);
  ASSERT_EQ(top.size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_LE(std::abs(top[k].value - ref.values[k]), 1e-6 * std::abs(ref.values[k]));
    EXPECT_GE(abs_cos(top[k].vector, ref.vectors[k]), 0.999);
  }
}

TEST(TopEigenpairs, PostconditionsOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const RgbImage img = seed % 2 ? random_image(14, 11, seed) : blocky_image(16, 12, seed);
    const auto A = build_affinity(img).normalized.matrix;
    const double tol = 1e-6;
    const auto top = top_eigenpairs(A, 5, tol);
    for (std::size_t k = 0; k < top.size(); ++k) {
      const auto& p = top[k];
      EXPECT_NEAR(norm(p.vector), 1.0, 1e-10);
      const auto av = A.multiply(p.vector);
      double r = 0.0;
      for (std::size_t i = 0; i < av.size(); ++i) r += (av[i] - p.value * p.vector[i]) * (av[i] - p.value * p.vector[i]);
      EXPECT_LE(std::sqrt(r), tol * std::max(std::abs(p.value), 1.0));
      EXPECT_NEAR(std::sqrt(r), p.residual, 1e-12);
      if (k) {
        EXPECT_GE(top[k - 1].value, p.value);
      }
      for (std::size_t j = 0; j < k; ++j) EXPECT_LE(std::abs(dot(top[j].vector, p.vector)), 1e-6);
      // Largest-magnitude entry is positive.
      const auto big = std::max_element(p.vector.begin(), p.vector.end(),
                                        [](double x, double y) { return std::abs(x) < std::abs(y); });
      EXPECT_GT(*big, 0.0);
    }
  }
}

TEST(TopEigenpairs, NonConvergenceReportsResiduals) {
  const auto A = build_affinity(blocky_image(30, 30, 7)).normalized.matrix;
  EigenOptions opt;
  opt.count = 6;
  opt.tol = 1e-14;
  opt.max_restarts = 1;
  opt.basis_size = 13;
  try {
    top_eigenpairs(A, opt);
    FAIL() << "expected EigenNotConverged";
  } catch (const EigenNotConverged& e) {
    EXPECT_EQ(e.residuals().size(), 6u);
  }
}

TEST(TopEigenpairs, DeterministicForFixedSeed) {
  const auto A = build_affinity(blocky_image(20, 15, 3)).normalized.matrix;
  EigenOptions opt;
  opt.count = 4;
  const auto a = lanczos_largest(A, opt), b = lanczos_largest(A, opt);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(a.pairs[k].value, b.pairs[k].value);
    EXPECT_EQ(a.pairs[k].vector, b.pairs[k].vector);
  }
}

TEST(TopEigenpairs, DeflationSearchesComplement) {
  const RgbImage img = blocky_image(16, 16, 12);
  const Discovery d = discover(img, 4);
  // The degree mode is an exact top eigenvector with value 1.
  EXPECT_NEAR(d.degree_mode.value, 1.0, 1e-10);
  EXPECT_LE(d.degree_mode.residual, 1e-10);
  const auto ref = oracle::jacobi_eigen(flat_dense(d.affinity.normalized.matrix), 256);
  EXPECT_NEAR(ref.values[0], 1.0, 1e-10);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LE(std::abs(dot(d.pairs()[k].vector, d.degree_mode.vector)), 1e-8);
    EXPECT_NEAR(d.pairs()[k].value, ref.values[k + 1], 1e-6);
  }
}

TEST(TopEigenpairs, EqualColorRectanglesLargerDominates) {
  const Scene s = scene_equal_color_rectangles(100);
  const Discovery d = discover(s.image, 1);
  const ObjectMap m = reverse_correct(d.map(1));
  // Larger rectangle is the ground-truth mask; the other is the remaining red.
  double big = 0.0, small = 0.0, bg = 0.0;
  std::size_t nb = 0, ns = 0, ng = 0;
  for (std::size_t i = 0; i < m.map.size(); ++i) {
    if (s.mask[i]) {
      big += m.map[i];
      ++nb;
    } else if (s.image.at(i) != s.image.at(0)) {
      small += m.map[i];
      ++ns;
    } else {
      bg += m.map[i];
      ++ng;
    }
  }
  ASSERT_GT(ns, 0u);
  EXPECT_GT(big / nb, small / ns);
  EXPECT_GT(big / nb, bg / ng);
}

TEST(Rayleigh, EigenvectorGivesEigenvalue) {
  const auto A = build_affinity(random_image(10, 10, 8)).normalized.matrix;
  const auto top = top_eigenpairs(A, 1, 1e-10);
  EXPECT_NEAR(rayleigh_quotient(A, top[0].vector), top[0].value, 1e-8);
}

TEST(Rayleigh, RandomVectorsStayWithinSpectrum) {
  const auto A = build_affinity(random_image(10, 10, 9)).normalized.matrix;
  const auto ref = oracle::jacobi_eigen(flat_dense(A), 100);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_unit(100, rng);
    const double q = rayleigh_quotient(A, v);
    EXPECT_GE(q, ref.values.back() - 1e-12);
    EXPECT_LE(q, ref.values.front() + 1e-12);
  }
}

TEST(Rayleigh, ScaleInvariantAndZeroRejected) {
  const auto A = build_affinity(random_image(5, 5, 1)).normalized.matrix;
  std::mt19937_64 rng(2);
  auto v = random_unit(25, rng);
  auto v2 = v;
  for (double& x : v2) x *= 2.0;
  EXPECT_EQ(rayleigh_quotient(A, v), rayleigh_quotient(A, v2));
  EXPECT_THROW(rayleigh_quotient(A, std::vector<double>(25, 0.0)), Error);
}

TEST(Rayleigh, SandwichInReturnedSpan) {
  const auto A = build_affinity(blocky_image(12, 12, 4)).normalized.matrix;
  const auto top = top_eigenpairs(A, 5, 1e-10);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(A.dimension(), 0.0);
    for (const auto& p : top) {
      const double c = g(rng);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * p.vector[i];
    }
    const double q = rayleigh_quotient(A, v);
    EXPECT_GE(q, top.back().value - 1e-9);
    EXPECT_LE(q, top.front().value + 1e-9);
  }
}

TEST(Alignment, SelfAndNegation) {
  const auto A = build_affinity(random_image(8, 8, 6)).normalized.matrix;
  EXPECT_NEAR(kernel_alignment(A, A), 1.0, 1e-14);
  EXPECT_NEAR(kernel_alignment(A, negated(A)), -1.0, 1e-14);
  std::mt19937_64 rng(9);
  const auto v = random_unit(64, rng);
  EXPECT_NEAR(kernel_alignment(RankOne{v}, RankOne{v}), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(kernel_alignment(A, RankOne{v}), kernel_alignment(RankOne{v}, A));
}

TEST(Alignment, RankOneMatchesDenseFrobenius) {
  const auto A = build_affinity(random_image(6, 5, 2)).normalized.matrix;
  std::mt19937_64 rng(4);
  const auto l = random_unit(30, rng);
  const auto dense = A.to_dense();
  double cross = 0.0, aa = 0.0, ll = 0.0;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) {
      cross += dense[i][j] * l[i] * l[j];
      aa += dense[i][j] * dense[i][j];
      ll += l[i] * l[j] * l[i] * l[j];
    }
  EXPECT_NEAR(kernel_alignment(A, RankOne{l}), cross / std::sqrt(aa * ll), 1e-12);
}

TEST(Alignment, LeadingEigenvectorBeatsRandomSigns) {
  const auto A = build_affinity(random_image(10, 10, 5)).normalized.matrix;
  const auto nu = top_eigenpairs(A, 1, 1e-10)[0].vector;
  const double best = kernel_alignment(A, RankOne{nu});
  std::mt19937_64 rng(6);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> l(100);
    for (double& x : l) x = rng() & 1 ? 1.0 : -1.0;
    EXPECT_GE(best, kernel_alignment(A, RankOne{l}));
  }
}

TEST(Alignment, ZeroNormThrows) {
  const auto A = build_affinity(random_image(4, 4, 1)).normalized.matrix;
  EXPECT_THROW(kernel_alignment(A, RankOne{std::vector<double>(16, 0.0)}), Error);
  SparseSymMatrix z = A;
  for (double& v : z.values()) v = 0.0;
  EXPECT_THROW(kernel_alignment(A, z), Error);
}

TEST(ThresholdLabels, ExtremesAndConstantImage) {
  const auto A = build_affinity(random_image(7, 7, 2)).normalized.matrix;
  const double inf = std::numeric_limits<double>::infinity();
  const SparseSymMatrix none = threshold_labels(A, inf), all = threshold_labels(A, -inf);
  for (double v : none.values()) EXPECT_EQ(v, -1.0);
  for (double v : all.values()) EXPECT_EQ(v, 1.0);
  EXPECT_TRUE(threshold_labels(A, 0.0).same_pattern(A));
  const auto C = build_affinity(RgbImage(9, 9, Rgb{0.3, 0.3, 0.3})).normalized.matrix;
  const SparseSymMatrix labels = threshold_labels(C, 0.0);
  for (double v : labels.values()) EXPECT_EQ(v, 1.0);
}
