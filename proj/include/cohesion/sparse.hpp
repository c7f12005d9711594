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

#ifndef COHESION_SPARSE_HPP
#define COHESION_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cohesion/image.hpp"
#include "cohesion/parallel.hpp"

namespace cohesion {

/// Square sparse matrix in compressed-row form whose producers keep it
/// symmetric (pattern and values). Column indices are sorted within a row.
class SparseSymMatrix {
public:
  SparseSymMatrix() = default;

  SparseSymMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                  std::vector<double> vals)
      : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
    if (row_ptr_.size() != n_ + 1 || cols_.size() != vals_.size() || row_ptr_.back() != cols_.size())
      throw Error("SparseSymMatrix: inconsistent compressed-row arrays");
  }

  /// Keeps every entry of a dense square matrix, zeros included.
  static SparseSymMatrix from_dense(const std::vector<std::vector<double>>& dense) {
    const std::size_t n = dense.size();
    std::vector<std::size_t> rp{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (const auto& row : dense) {
      if (row.size() != n) throw Error("from_dense: matrix is not square");
      for (std::size_t j = 0; j < n; ++j) {
        cols.push_back(j);
        vals.push_back(row[j]);
      }
      rp.push_back(cols.size());
    }
    return {n, std::move(rp), std::move(cols), std::move(vals)};
  }

  std::size_t dimension() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return vals_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> cols() const noexcept { return cols_; }
  std::span<const double> values() const noexcept { return vals_; }
  std::span<double> values() noexcept { return vals_; }

  std::size_t row_nonzeros(std::size_t i) const noexcept { return row_ptr_[i + 1] - row_ptr_[i]; }

  bool contains(std::size_t i, std::size_t j) const noexcept { return find(i, j) != npos; }

  /// Stored value, or 0 when (i,j) is structurally absent.
  double at(std::size_t i, std::size_t j) const noexcept {
    const std::size_t p = find(i, j);
    return p == npos ? 0.0 : vals_[p];
  }

  /// y = M x.
  void multiply(std::span<const double> x, std::span<double> y) const {
    parallel_for(n_, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double s = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += vals_[p] * x[cols_[p]];
        y[i] = s;
      }
    });
  }

  std::vector<double> multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
  }

  std::vector<double> row_sums() const {
    std::vector<double> s(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s[i] += vals_[p];
    return s;
  }

  /// Largest |M_ij - M_ji|; a missing mirror entry counts its full value.
  double symmetry_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        const std::size_t q = find(cols_[p], i);
        worst = std::max(worst, q == npos ? std::abs(vals_[p]) : std::abs(vals_[p] - vals_[q]));
      }
    return worst;
  }

  bool same_pattern(const SparseSymMatrix& o) const noexcept {
    return n_ == o.n_ && row_ptr_ == o.row_ptr_ && cols_ == o.cols_;
  }

  /// Frobenius inner product over the union of both patterns.
  double frobenius_dot(const SparseSymMatrix& o) const {
    if (o.n_ != n_) throw Error("frobenius_dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += vals_[p] * o.at(i, cols_[p]);
    return s;
  }

  std::vector<std::vector<double>> to_dense() const {
    std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d[i][cols_[p]] = vals_[p];
    return d;
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t find(std::size_t i, std::size_t j) const noexcept {
    if (i >= n_) return npos;
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? static_cast<std::size_t>(it - cols_.begin()) : npos;
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

}  // namespace cohesion

#endif  // COHESION_SPARSE_HPP
