#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cavbell {

/// Runs fn(i) for i in [0, n), chunked over up to `threads` workers. Each
/// index is visited exactly once; callers write to disjoint slots, so the
/// result is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, const Fn& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline unsigned default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace cavbell
