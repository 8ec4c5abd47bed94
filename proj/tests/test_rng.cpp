#include "qanogan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

using qanogan::RngStream;
using qanogan::derive_stream;

TEST_CASE("same seed reproduces the same draws") {
  RngStream a(12345);
  RngStream b(12345);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(12345);
  RngStream d(12345);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("derived streams are purpose-separated") {
  RngStream a = derive_stream(7, "latent");
  RngStream b = derive_stream(7, "minibatch");
  RngStream a2 = derive_stream(7, "latent");
  CHECK(a.next_u64() == a2.next_u64());
  CHECK(derive_stream(7, "latent").next_u64() != b.next_u64());
  CHECK(derive_stream(7, "latent", 0).next_u64() != derive_stream(7, "latent", 1).next_u64());
}

TEST_CASE("uniform stays in [0, 1) and fills the range") {
  RngStream rng(99);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform_int is bounded and roughly even") {
  RngStream rng(4);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = rng.uniform_int(5);
    REQUIRE(v < 5);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(std::abs(c - n / 5) < 500);
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal has roughly zero mean and unit variance") {
  RngStream rng(2024);
  const int n = 50000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("shuffle permutes without loss") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  RngStream rng(5);
  qanogan::shuffle(v, rng);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) CHECK(sorted[i] == i);
  // With 100 elements an unmoved permutation would indicate a broken shuffle.
  int moved = 0;
  for (int i = 0; i < 100; ++i) moved += (v[i] != i);
  CHECK(moved > 50);
}
