#pragma once

#include <cstdint>

namespace kz {

/// Counter-based generator: the value for (seed, counter, lane) is a pure
/// function of its arguments, so streams can be split across workers by
/// disjoint counter ranges and still reproduce bit-for-bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter, std::uint32_t lane) const {
    std::uint64_t x = mix(seed_ ^ mix(counter * 0x9E3779B97F4A7C15ULL + lane));
    return mix(x + lane * 0xD1B54A32D192ED03ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter, std::uint32_t lane) const {
    return static_cast<double>(bits(counter, lane) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace kz
