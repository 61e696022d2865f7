#pragma once

#include <cstdint>

namespace cake {

// "cake-rng" version 1: splitmix64-seeded xoshiro256**, with uniform doubles
// built from the top 53 bits. Self-contained so that seeded runs are
// bit-reproducible across standard libraries and platforms.
inline constexpr const char* kRngName = "cake-rng";
inline constexpr int kRngVersion = 1;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Independent substream; identical (seed, stream) pairs yield identical
  /// sequences regardless of construction order.
  Rng(std::uint64_t seed, std::uint64_t stream)
      : Rng(seed ^ (0x9E3779B97F4A7C15ull + stream * 0xD1B54A32D192ED03ull)) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection-free modulo is fine here: bounds are tiny vs 2^64.
    return next_u64() % bound;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace cake
