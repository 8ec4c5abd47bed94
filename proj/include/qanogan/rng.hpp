#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace qanogan {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fully specified by the standard; the distributions on top are
// hand-rolled because the standard library ones are implementation-defined.
// Two builds with the same seed therefore produce identical draws.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps the result unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
    constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t excess = (max % n + 1) % n;  // 2^64 mod n
    std::uint64_t x = gen_();
    while (excess != 0 && x >= max - excess + 1) x = gen_();
    return x % n;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// Derives an independent stream for a named purpose. Streams for distinct
// purposes (or indices) never share state, so adding a consumer in one part
// of the pipeline cannot shift the draws seen by another.
inline RngStream derive_stream(std::uint64_t root_seed, std::string_view purpose,
                               std::uint64_t index = 0) {
  std::uint64_t s = detail::splitmix64(root_seed ^ detail::fnv1a(purpose));
  s = detail::splitmix64(s + 0x9e3779b97f4a7c15ull * index);
  return RngStream(s);
}

// Fisher-Yates shuffle driven by an RngStream.
template <typename T>
void shuffle(std::vector<T>& values, RngStream& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.uniform_int(i)]);
  }
}

}  // namespace qanogan
