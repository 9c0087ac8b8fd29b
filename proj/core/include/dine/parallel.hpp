#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace dine {

// Worker cap: DINE_THREADS env var when set, hardware concurrency otherwise.
int worker_count();

// Runs fn(i) for i in [0, n) across workers in contiguous chunks. Callers
// must write results to disjoint preallocated slots so the outcome is
// independent of the thread layout. num_threads <= 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int num_threads = 0) {
  if (num_threads <= 0) num_threads = worker_count();
  if (num_threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(num_threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dine
