#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace maxcurv {

/// Number of worker threads used by parallel_for; 0 means hardware default.
/// Set once from the CLI; library callers treat it as read-only.
inline int& worker_threads() {
  static int n = 0;
  return n;
}

/// Runs fn(i) for i in [0, count). Work is pulled in contiguous chunks so the
/// result assembly is deterministic as long as fn writes only to slot i.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  int nthreads = worker_threads();
  if (nthreads <= 0) nthreads = static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const std::size_t chunk = std::max<std::size_t>(1, count / (8 * nthreads));
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace maxcurv
