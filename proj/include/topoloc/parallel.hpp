#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace topoloc {

/// Calls task(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; the first exception stops the pool and is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  const auto cap = static_cast<unsigned>(std::min<std::size_t>(count, 1u << 16));
  const unsigned n_threads = std::max(1u, std::min(threads, cap));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

/// Thread count from TOPOLOC_THREADS, or `fallback` when unset or invalid.
unsigned threads_from_env(unsigned fallback);

}  // namespace topoloc
