#pragma once

/* rng.hpp -- deterministic random source used everywhere randomness appears.
 *
 * SplitMix64 with Box-Muller normals. We deliberately avoid the standard
 * library distributions: their output is implementation-defined, and session
 * replay has to be byte-identical across toolchains.
 *
 * Seed derivation is splittable: derive_seed(master, index) depends only on
 * its arguments, so participant k draws the same stream no matter how many
 * other participants ran before it.
 */

#include <cmath>
#include <cstdint>

namespace gotcha {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Order-independent child seed: one SplitMix64 output of a state offset by
// the golden-ratio increment scaled by (index + 1).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master + 0x9E3779B97F4A7C15ull * (index + 1));
  return g.next_u64();
}

}  // namespace gotcha
