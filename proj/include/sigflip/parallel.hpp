#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sigflip {

// Effective worker count. requested > 0 wins locally; otherwise the
// implementation default min(hardware, 8). SIGFLIP_THREADS, when set to a
// positive integer, caps the result. Always >= 1.
int resolve_threads(int requested = 0);

// Runs fn(i) for i in [0, count). Results must go into index-addressed slots;
// scheduling order is unspecified, so determinism comes from writing only to
// slot i inside fn(i). If several calls throw, the exception from the
// smallest index is rethrown after all workers drain.
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = static_cast<std::size_t>(-1);
  std::exception_ptr err;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };

  std::size_t workers = static_cast<std::size_t>(threads);
  if (workers > count) workers = count;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sigflip
