#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace grasorw {

using vertex_t = std::uint64_t;
using block_t = std::uint32_t;
using hop_t = std::uint32_t;

inline constexpr vertex_t kNoVertex = std::numeric_limits<vertex_t>::max();

// Limits imposed by the 128-bit walk record.
inline constexpr unsigned kSourceBits = 42;
inline constexpr unsigned kOffsetBits = 28;
inline constexpr unsigned kBlockBits = 10;
inline constexpr unsigned kHopBits = 10;

inline constexpr std::uint64_t kMaxVertices = std::uint64_t{1} << kSourceBits;
inline constexpr std::uint64_t kMaxBlockSpan = std::uint64_t{1} << kOffsetBits;
inline constexpr block_t kMaxBlocks = block_t{1} << kBlockBits;
inline constexpr hop_t kMaxHops = hop_t{1} << kHopBits;

/// Base class for recoverable failures: malformed input, truncated files,
/// I/O errors. Programming errors use std::logic_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LoadMode : std::uint8_t { Full, OnDemand };

inline const char* to_string(LoadMode m) { return m == LoadMode::Full ? "full" : "ondemand"; }

}  // namespace grasorw
