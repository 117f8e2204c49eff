#pragma once

#include <cstdint>

#include "grasorw/types.hpp"

namespace grasorw {

/// Identifies one random draw. Equal keys give equal draws no matter which
/// thread, block or time slot evaluates them.
struct RngKey {
  std::uint64_t seed = 0;
  vertex_t source = 0;
  std::uint64_t walk_index = 0;
  hop_t hop = 0;
};

enum class Stream : std::uint64_t {
  Step = 0x5354455053544550ull,
  Terminate = 0x5445524D5445524Dull,
  Schedule = 0x5343484553434845ull,
};

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t draw_bits(const RngKey& k, Stream s) {
  constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  std::uint64_t h = mix64(k.seed + kGamma);
  h = mix64(h ^ (k.source + kGamma));
  h = mix64(h ^ (k.walk_index * kGamma + 1));
  h = mix64(h ^ (std::uint64_t{k.hop} << 32 | 0x9E37u));
  return mix64(h ^ static_cast<std::uint64_t>(s));
}

/// Uniform double in [0, 1) with 53 random bits.
inline constexpr double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline constexpr double draw_unit(const RngKey& k, Stream s) { return to_unit(draw_bits(k, s)); }

/// Sequential generator used when runs need not be reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}
  std::uint64_t next() { return mix64(state_ += 0x9E3779B97F4A7C15ull); }
  double unit() { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace grasorw
