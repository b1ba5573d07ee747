#pragma once

#include <cstdint>
#include <random>

namespace semcache {

// mt19937_64 with portable bounded draws. The standard distributions are
// implementation defined, which would make regression-locked traces depend
// on the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n); n must be > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer on [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  // Uniform real on [lo, hi]; exactly lo when the range is empty.
  double uniform(double lo, double hi) {
    return lo == hi ? lo : lo + (hi - lo) * uniform01();
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace semcache
