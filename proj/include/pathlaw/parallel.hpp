#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pathlaw {

// Static contiguous partition of [0, n) across workers. Results written to
// preallocated disjoint slots are identical for every worker count.
template <class Fn>
void parallel_for(long n, int workers, Fn&& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2L * workers) {
    body(0L, n);
    return;
  }
  const long chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pathlaw
