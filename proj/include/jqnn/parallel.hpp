// Tiny fork-join helper. Worker count is capped by the JQNN_THREADS
// environment variable (default: hardware concurrency).
#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace jqnn {

inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("JQNN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  return static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Each index is claimed once; results must be
// written to per-index slots so the output is deterministic regardless of
// scheduling.
inline void parallel_for(long long n, const std::function<void(long long)>& fn) {
  if (n <= 0) return;
  int workers = worker_count();
  if (workers <= 1 || n == 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<int>(n);
  std::atomic<long long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        long long i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace jqnn
