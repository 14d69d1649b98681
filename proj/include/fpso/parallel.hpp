#pragma once

// Replicate-level parallelism.  FPSO_THREADS caps the worker count; results
// are always aggregated in job-index order, so the thread count never
// changes any output.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fpso {

inline int thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("FPSO_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) cap = requested;
    } catch (const std::exception&) {
      // Malformed values fall back to the hardware count.
    }
  }
  return cap;
}

// Runs fn(0) .. fn(count - 1) on at most `threads` workers.  The first
// exception thrown by any job is rethrown after all workers finish.
inline void parallel_for_index(int count, int threads,
                               const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (threads > count) threads = count;
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  std::atomic<int> next{0};
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
          fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace fpso
