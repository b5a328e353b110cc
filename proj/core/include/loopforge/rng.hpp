#pragma once

#include <cstdint>

namespace loopforge {

/// Counter-based splittable generator (splitmix-style output function).
/// A (seed, stream) pair fully determines the sequence, independent of any
/// other stream, so parallel chains are reproducible regardless of
/// scheduling.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream ^ 0x9E3779B97F4A7C15ULL))) {}

  uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n).
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  uint64_t counter() const { return counter_; }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace loopforge
