#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace htga {

/// SplitMix64 step; used for seed mixing and stream derivation.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic per-trial seed from (master_seed, trial_index).
inline uint64_t derive_seed(uint64_t master_seed, uint64_t trial_index) {
  uint64_t s = master_seed;
  uint64_t a = splitmix64(s);
  s = a ^ (trial_index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  uint64_t b = splitmix64(s);
  return splitmix64(s) ^ b;
}

/// xoshiro256++ (Blackman/Vigna), seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0x853C49E6748FEA9BULL) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double unit() { return (next() >> 11) * 0x1.0p-53; }

  /// Uniform double in the open interval (0, 1); safe under log().
  double unit_open() { return ((next() >> 12) + 0.5) * 0x1.0p-52; }

  bool bernoulli(double p) { return unit() < p; }

  /// Unbiased integer in [0, bound); bound >= 1. Lemire's method.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = (unsigned __int128)next() * bound;
    auto lo = (uint64_t)m;
    if (lo < bound) {
      uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = (unsigned __int128)next() * bound;
        lo = (uint64_t)m;
      }
    }
    return (uint64_t)(m >> 64);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

/// Exact Bin(n, p) sample via geometric skips; O(n * min(p, 1-p)) expected.
uint32_t sample_binomial(uint32_t n, double p, Rng& rng);

/// Fills `out` with `count` distinct values from [0, n), uniformly over subsets
/// (Floyd's algorithm). Order of entries is an implementation detail.
void sample_distinct(uint32_t n, uint32_t count, Rng& rng, std::vector<uint32_t>& out);

}  // namespace htga
