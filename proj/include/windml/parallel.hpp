#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace windml {

/// Worker cap from WINDML_THREADS (default 1, never more than the hardware
/// reports).
inline std::size_t worker_count() {
  std::size_t n = 1;
  if (const char* env = std::getenv("WINDML_THREADS")) {
    try {
      n = static_cast<std::size_t>(std::max(1L, std::stol(env)));
    } catch (...) {
      n = 1;
    }
  }
  const std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
  return std::min(n, hw);
}

/// Runs fn(i) for i in [0, n). Each index writes only its own result slot, so
/// merged output does not depend on scheduling. The first exception (lowest
/// index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count()) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace windml
