#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pfgtd::env {

/// Seeded 64-bit engine with distribution code that does not depend on the
/// standard library's (implementation-defined) distributions, so traces are
/// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  /// Index drawn from unnormalised nonnegative weights (first..last iterators).
  template <class It>
  int categorical(It first, It last) {
    double total = 0.0;
    for (It it = first; it != last; ++it) total += *it;
    const double u = uniform() * total;
    double acc = 0.0;
    int idx = 0;
    int last_positive = 0;
    for (It it = first; it != last; ++it, ++idx) {
      if (*it > 0.0) last_positive = idx;
      acc += *it;
      if (u < acc) return idx;
    }
    return last_positive;
  }

 private:
  // splitmix64 finaliser so nearby seeds give unrelated streams
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pfgtd::env
