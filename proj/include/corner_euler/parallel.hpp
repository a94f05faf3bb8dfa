#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace corner_euler {

/// Process-wide worker count for data-parallel loops. Defaults to 1.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(begin, end) on each. Every index is handled by exactly one call, so
/// per-index results do not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    if (n > 0) fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace corner_euler
