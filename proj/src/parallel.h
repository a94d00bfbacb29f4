// Copyright 2026 The Parakit Authors
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

#ifndef PARAKIT_SRC_PARALLEL_H_
#define PARAKIT_SRC_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace parakit::internal {

/// Runs fn(i) for i in [0, n) on up to `max_workers` threads. If any call
/// throws, the exception of the lowest failing index is rethrown after all
/// workers finish, so failures are reported deterministically.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t max_workers, Fn&& fn) {
  const std::size_t workers = std::min(n, std::max<std::size_t>(max_workers, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t DefaultWorkers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace parakit::internal

#endif  // PARAKIT_SRC_PARALLEL_H_
