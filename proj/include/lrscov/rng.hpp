#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrscov {

// splitmix64, used to derive independent sub-stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic random stream on top of mt19937_64. The double conversions
// are spelled out (rather than using std:: distributions, whose algorithms
// are implementation-defined) so that a seed pins the generated values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_base_(seed) {}

  // Sub-stream keyed by id; streams with distinct ids are independent.
  Rng spawn(std::uint64_t id) const {
    return Rng(mix_seed(seed_base_ ^ mix_seed(id)));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n must be >= 1. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double sign() { return (engine_() & 1ULL) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller (no rejection, two values per pair).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_base_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lrscov
