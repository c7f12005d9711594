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

#ifndef COHESION_PARALLEL_HPP
#define COHESION_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cohesion {

namespace detail {
inline std::atomic<unsigned>& thread_budget() {
  static std::atomic<unsigned> budget{std::max(1u, std::thread::hardware_concurrency())};
  return budget;
}
}  // namespace detail

/// Caps intra-run parallelism; 0 restores the machine default.
inline void set_thread_count(unsigned n) {
  detail::thread_budget() = n == 0 ? std::max(1u, std::thread::hardware_concurrency()) : n;
}

inline unsigned thread_count() { return detail::thread_budget(); }

/// Calls fn(begin, end) over contiguous chunks of [0, n). Each index is
/// visited by exactly one thread, so results are independent of the thread
/// count as long as fn writes only to slots it owns.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 2048) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), (n + min_chunk - 1) / std::max<std::size_t>(1, min_chunk));
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace cohesion

#endif  // COHESION_PARALLEL_HPP
