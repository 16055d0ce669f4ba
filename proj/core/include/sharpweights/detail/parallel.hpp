// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sharpweights::detail {

// jobs <= 0 means one worker per hardware thread.
inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls fn(chunk, begin, end) on `chunks` contiguous ranges covering [0, n).
// The split depends only on n and the chunk count, so a reduction done in
// chunk order is reproducible for a fixed jobs setting. The first exception
// thrown by any chunk is rethrown on the caller.
template <class Fn>
void parallel_chunks(std::size_t n, int jobs, Fn&& fn) {
  if (n == 0) return;
  const std::size_t chunks =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, resolve_jobs(jobs))));
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) {
      workers.emplace_back([&, c] {
        try {
          fn(c, bounds(c), bounds(c + 1));
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    try {
      fn(std::size_t{0}, bounds(0), bounds(1));
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Chunk count actually used by parallel_chunks for n items.
inline std::size_t chunk_count(std::size_t n, int jobs) {
  if (n == 0) return 0;
  return std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, resolve_jobs(jobs))));
}

}  // namespace sharpweights::detail
