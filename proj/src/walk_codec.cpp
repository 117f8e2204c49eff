#include "grasorw/walk_codec.hpp"

#include <string>

namespace grasorw {

namespace {

constexpr std::uint64_t mask(unsigned bits) { return (std::uint64_t{1} << bits) - 1; }

void check(std::uint64_t value, unsigned bits, const char* name) {
  if (value > mask(bits)) {
    throw std::out_of_range(std::string("walk field ") + name + " = " + std::to_string(value) + " exceeds " +
                            std::to_string(bits) + " bits");
  }
}

}  // namespace

Walk128 encode(const WalkFields& f) {
  check(f.source, kSourceBits, "source");
  check(f.pre_offset, kOffsetBits, "pre_offset");
  check(f.cur_offset, kOffsetBits, "cur_offset");
  check(f.pre_block, kBlockBits, "pre_block");
  check(f.cur_block, kBlockBits, "cur_block");
  check(f.hop, kHopBits, "hop");

  Walk128 w;
  // pre_offset straddles the word boundary: 22 low bits in lo, 6 high bits in hi.
  w.lo = f.source | (std::uint64_t{f.pre_offset} << 42);
  w.hi = (std::uint64_t{f.pre_offset} >> 22) | (std::uint64_t{f.cur_offset} << 6) |
         (std::uint64_t{f.pre_block} << 34) | (std::uint64_t{f.cur_block} << 44) | (std::uint64_t{f.hop} << 54);
  return w;
}

WalkFields decode(Walk128 w) {
  WalkFields f;
  f.source = w.lo & mask(42);
  f.pre_offset = static_cast<std::uint32_t>((w.lo >> 42) | ((w.hi & mask(6)) << 22));
  f.cur_offset = static_cast<std::uint32_t>((w.hi >> 6) & mask(28));
  f.pre_block = static_cast<block_t>((w.hi >> 34) & mask(10));
  f.cur_block = static_cast<block_t>((w.hi >> 44) & mask(10));
  f.hop = static_cast<hop_t>(w.hi >> 54);
  return f;
}

vertex_t global_vertex(std::uint32_t offset, block_t block, std::span<const vertex_t> starts) {
  if (std::size_t{block} + 1 >= starts.size()) {
    throw std::out_of_range("block " + std::to_string(block) + " out of range");
  }
  if (offset >= starts[block + 1] - starts[block]) {
    throw std::out_of_range("offset " + std::to_string(offset) + " outside span of block " + std::to_string(block));
  }
  return starts[block] + offset;
}

}  // namespace grasorw
