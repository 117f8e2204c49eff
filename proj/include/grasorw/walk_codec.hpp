#pragma once

#include <cstdint>
#include <span>

#include "grasorw/types.hpp"

namespace grasorw {

/// Decoded walk state. Previous and current vertices are stored as offsets
/// inside their residing blocks.
struct WalkFields {
  std::uint64_t source = 0;      // 42 bits
  std::uint32_t pre_offset = 0;  // 28 bits
  std::uint32_t cur_offset = 0;  // 28 bits
  block_t pre_block = 0;         // 10 bits
  block_t cur_block = 0;         // 10 bits
  hop_t hop = 0;                 // 10 bits

  friend bool operator==(const WalkFields&, const WalkFields&) = default;
};

/// 128-bit packed walk record. Bit layout from least significant bit:
/// source(42) | pre_offset(28) | cur_offset(28) | pre_block(10) | cur_block(10) | hop(10).
/// `lo` carries bits 0..63 and `hi` bits 64..127; on disk the record is the
/// 16-byte little-endian image (lo first).
struct Walk128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend bool operator==(const Walk128&, const Walk128&) = default;
  friend auto operator<=>(const Walk128&, const Walk128&) = default;

  // Field accessors that skip a full decode.
  block_t pre_block() const { return static_cast<block_t>((hi >> 34) & 0x3FF); }
  block_t cur_block() const { return static_cast<block_t>((hi >> 44) & 0x3FF); }
  hop_t hop() const { return static_cast<hop_t>(hi >> 54); }
  std::uint64_t source() const { return lo & ((std::uint64_t{1} << 42) - 1); }
};
static_assert(sizeof(Walk128) == 16);

/// Throws std::out_of_range if any field exceeds its width.
Walk128 encode(const WalkFields& f);
WalkFields decode(Walk128 w);

/// start[block] + offset; throws std::out_of_range when offset is outside the
/// block's span. `starts` is the start-vertex table (block_count + 1 entries).
vertex_t global_vertex(std::uint32_t offset, block_t block, std::span<const vertex_t> starts);

}  // namespace grasorw
