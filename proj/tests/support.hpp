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

#ifndef COHESION_TESTS_SUPPORT_HPP
#define COHESION_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cohesion/image.hpp"
#include "cohesion/sparse.hpp"

namespace testing_support {

inline cohesion::RgbImage random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cohesion::RgbImage img(w, h);
  for (double& v : img.values()) v = u(rng);
  return img;
}

/// Piecewise-constant image: a few random rectangles on a random background,
/// plus small noise. Closer to real inputs than uniform noise.
inline cohesion::RgbImage blocky_image(std::size_t w, std::size_t h, std::uint64_t seed, double noise = 0.02) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cohesion::RgbImage img(w, h, cohesion::Rgb{u(rng), u(rng), u(rng)});
  for (int k = 0; k < 3; ++k) {
    const std::size_t r0 = rng() % h, c0 = rng() % w;
    const std::size_t r1 = std::min(h, r0 + 2 + rng() % (h / 2 + 1)), c1 = std::min(w, c0 + 2 + rng() % (w / 2 + 1));
    const cohesion::Rgb col{u(rng), u(rng), u(rng)};
    for (std::size_t r = r0; r < r1; ++r)
      for (std::size_t c = c0; c < c1; ++c) img.set(r, c, col);
  }
  std::normal_distribution<double> n(0.0, noise);
  for (double& v : img.values()) v = std::clamp(v + n(rng), 0.0, 1.0);
  return img;
}

/// Row-major dense copy for the Jacobi oracle.
inline std::vector<double> flat_dense(const cohesion::SparseSymMatrix& m) {
  std::vector<double> out;
  for (const auto& row : m.to_dense()) out.insert(out.end(), row.begin(), row.end());
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cohesion_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support

#endif  // COHESION_TESTS_SUPPORT_HPP
