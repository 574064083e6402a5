#include "asel/common.hpp"
#include "asel/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace asel;

TEST_CASE("derive_seed is deterministic and separates tags and indices") {
  CHECK(derive_seed(7, 3, 1) == derive_seed(7, 3, 1));
  CHECK(derive_seed(7, 3, 1) != derive_seed(7, 4, 1));
  CHECK(derive_seed(7, 3, 1) != derive_seed(7, 3, 2));
  CHECK(derive_seed(7, 3, 1) != derive_seed(8, 3, 1));
}

TEST_CASE("Rng streams are reproducible") {
  Rng a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
  }
  CHECK(a.normal() != c.normal());
}

TEST_CASE("Rng normal has the right first two moments") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("Rng::below stays in range and is uniform-ish") {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("parallel_for matches the serial reference bit for bit") {
  const int n = 64;
  std::vector<double> serial(n), parallel(n);
  auto body = [](std::int64_t i) {
    Rng rng(derive_seed(42, static_cast<std::uint64_t>(i)));
    double acc = 0.0;
    for (int k = 0; k < 100; ++k) acc += rng.normal();
    return acc;
  };
  parallel_for(
      n, [&](std::int64_t i) { serial[static_cast<std::size_t>(i)] = body(i); },
      Exec::Serial);
  parallel_for(
      n,
      [&](std::int64_t i) { parallel[static_cast<std::size_t>(i)] = body(i); },
      Exec::Parallel);
  for (int i = 0; i < n; ++i)
    CHECK(serial[static_cast<std::size_t>(i)] ==
          parallel[static_cast<std::size_t>(i)]);
}
