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

namespace spl {

/// Worker cap: SPL_LAB_THREADS when set and positive, otherwise the hardware
/// concurrency.
inline std::size_t thread_budget() {
  if (const char* env = std::getenv("SPL_LAB_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace detail {
inline thread_local bool in_worker = false;
}

/// Calls fn(i) for i in [0, n). Results must be written to slot i by the
/// callee so that the reduction order never depends on scheduling. The first
/// exception thrown by any task is rethrown on the calling thread. Calls made
/// from inside a worker run serially.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = detail::in_worker ? 1 : std::min(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    detail::in_worker = true;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lk(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace spl
