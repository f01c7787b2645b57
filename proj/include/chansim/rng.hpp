#pragma once

#include <cstdint>

namespace chansim {

// Counter-based SplitMix64 stream. The k-th output is a pure function of
// (key, k), so a stream can be split into independent child streams without
// sharing mutable state. Identical (seed, stream) pairs produce identical
// sequences on every platform; nothing here depends on libstdc++
// distribution internals.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(key_ + counter_);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Derive an independent child stream; advances this stream by one draw.
  RandomStream split() {
    return RandomStream(next_u64(), 0xD1B54A32D192ED03ULL);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace chansim
