#include <doctest.h>

#include "crcond/parallel.hpp"
#include "crcond/rng.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using namespace crcond;

TEST_CASE("uniform draws stay in [0,1) and repeat per seed") {
  Rng a(123), b(123), c(124);
  bool same = true;
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    same = same && x == b.uniform();
    differs = differs || x != c.uniform();
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("below is bounded and reaches every residue") {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(10);
    CHECK(v < 10);
    seen.insert(v);
  }
  CHECK(seen.size() == 10);
  CHECK(rng.below(1) == 0);
}

TEST_CASE("gaussian has roughly standard moments") {
  Rng rng(42);
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(stddev - 1.0) < 0.03);
}

TEST_CASE("derive_seed separates salts and is stable") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("parallel_for_each touches every index exactly once") {
  for (const std::ptrdiff_t n : {0L, 17L, 10000L}) {
    std::vector<int> hits(static_cast<std::size_t>(n), 0);
    parallel_for_each(n, [&](std::ptrdiff_t i) { hits[static_cast<std::size_t>(i)] += 1; });
    for (const int h : hits) CHECK(h == 1);
  }
}
