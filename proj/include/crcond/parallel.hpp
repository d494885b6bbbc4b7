#pragma once

#include <cstddef>
#include <functional>

namespace crcond {

/// Worker thread count: CRCOND_THREADS if set (clamped to >= 1), otherwise
/// std::thread::hardware_concurrency().
int thread_count();

/// Runs body(i) for i in [0, n). Iterations must be independent and write
/// only their own slots; results are then identical for any thread count.
/// Reductions stay with the caller so summation order is fixed.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& chunk);

template <typename Body>
void parallel_for_each(std::ptrdiff_t n, Body body) {
  parallel_for(n, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace crcond
