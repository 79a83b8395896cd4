#pragma once
// Minimal static-partition parallel loop over an index range.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace loggamma {

/// Thread count from LOGGAMMA_THREADS, else the hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("LOGGAMMA_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n). Each index runs exactly once; the first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (n <= 0) return;
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::min<long>(n, 1024))));
  if (threads == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (long i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace loggamma
