#include "corner_euler/parallel.hpp"

#include <atomic>
#include <stdexcept>

namespace corner_euler {

namespace {
std::atomic<std::size_t> g_workers{1};
}

std::size_t worker_count() { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(std::size_t n) {
  if (n == 0) throw std::invalid_argument("workers: must be at least 1");
  g_workers.store(n, std::memory_order_relaxed);
}

}  // namespace corner_euler
