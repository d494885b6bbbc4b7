#include "crcond/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace crcond {

int thread_count() {
  static const int count = [] {
    if (const char* env = std::getenv("CRCOND_THREADS")) {
      const int parsed = std::atoi(env);
      if (parsed >= 1) return parsed;
      return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return count;
}

namespace {
constexpr std::ptrdiff_t kMinParallelWork = 4096;
}

void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& chunk) {
  if (n <= 0) return;
  const int threads = std::min<std::ptrdiff_t>(thread_count(), n);
  if (threads <= 1 || n < kMinParallelWork) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::ptrdiff_t per = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::ptrdiff_t begin = t * per;
    const std::ptrdiff_t end = std::min(n, begin + per);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] { chunk(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace crcond
