#pragma once

#include <array>
#include <cstdint>

namespace vista {

// Platform-independent PRNG used for every sampled parameter. Fixed here
// instead of std::mt19937 + std::*_distribution because the standard
// distributions are implementation-defined, which would make suite manifests
// differ between toolchains.
//
//   seeding:  SplitMix64 (Steele, Lea, Flood) expands a 64-bit seed into the
//             256-bit xoshiro state (four successive outputs).
//   stream:   xoshiro256** 1.0 (Blackman, Vigna).
//   doubles:  (next() >> 11) * 2^-53, uniform on [0, 1).
//   children: entry i of a suite draws from the stream seeded with
//             splitmix64(seed ^ splitmix64(i)), independent of the suite size.

/// One SplitMix64 step applied to state `x`: returns the output for x + golden.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256 {
 public:
  explicit constexpr Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      word = splitmix64(sm);
      sm += 0x9E3779B97F4A7C15ULL;
    }
  }

  static constexpr Xoshiro256 for_entry(std::uint64_t seed, std::uint64_t index) {
    return Xoshiro256(splitmix64(seed ^ splitmix64(index)));
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// [0, 1), one draw.
  constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// (0, 1], one draw. Safe as a log() argument.
  constexpr double uniform01_open_low() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  constexpr const std::array<std::uint64_t, 4>& state() const { return s_; }
  friend constexpr bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace vista
