#include "sepmot/threading.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sepmot {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  const int cap = g_max_threads.load();
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int def = hw > 0 ? hw : 1;
  return cap > 0 ? std::min(cap, def) : def;
}

void parallel_for(int n, const std::function<void(int)>& f) {
  if (n <= 0) return;
  const int workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  // Static contiguous chunks; chunk boundaries depend only on (n, workers),
  // and each index writes its own slots, so output is order-independent.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int base = n / workers;
  const int rem = n % workers;
  int start = 0;
  for (int w = 0; w < workers; ++w) {
    const int count = base + (w < rem ? 1 : 0);
    const int lo = start;
    const int hi = start + count;
    start = hi;
    pool.emplace_back([lo, hi, &f, &first_error, &error_mutex] {
      try {
        for (int i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sepmot
