#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "grasorw/kernels.hpp"
#include "grasorw/walk_codec.hpp"

namespace grasorw {
namespace {

using u128 = unsigned __int128;

// Independent packing with a native 128-bit integer.
u128 pack_reference(const WalkFields& f) {
  u128 x = 0;
  unsigned shift = 0;
  auto put = [&](std::uint64_t v, unsigned bits) {
    x |= static_cast<u128>(v) << shift;
    shift += bits;
  };
  put(f.source, 42);
  put(f.pre_offset, 28);
  put(f.cur_offset, 28);
  put(f.pre_block, 10);
  put(f.cur_block, 10);
  put(f.hop, 10);
  return x;
}

u128 as_u128(Walk128 w) { return static_cast<u128>(w.hi) << 64 | w.lo; }

WalkFields random_fields(std::mt19937_64& gen) {
  WalkFields f;
  f.source = gen() & ((1ull << 42) - 1);
  f.pre_offset = static_cast<std::uint32_t>(gen() & ((1u << 28) - 1));
  f.cur_offset = static_cast<std::uint32_t>(gen() & ((1u << 28) - 1));
  f.pre_block = static_cast<block_t>(gen() & 0x3FF);
  f.cur_block = static_cast<block_t>(gen() & 0x3FF);
  f.hop = static_cast<hop_t>(gen() & 0x3FF);
  return f;
}

TEST(WalkCodec, MatchesNativeInt128Packing) {
  std::mt19937_64 gen(42);
  for (int k = 0; k < 100000; ++k) {
    const auto f = random_fields(gen);
    const auto w = encode(f);
    ASSERT_TRUE(as_u128(w) == pack_reference(f));
    ASSERT_EQ(decode(w), f);
    EXPECT_EQ(w.pre_block(), f.pre_block);
    EXPECT_EQ(w.cur_block(), f.cur_block);
    EXPECT_EQ(w.hop(), f.hop);
    EXPECT_EQ(w.source(), f.source);
  }
}

TEST(WalkCodec, AllOnesAndZeros) {
  WalkFields zero;
  EXPECT_EQ(encode(zero), (Walk128{0, 0}));
  WalkFields max{(1ull << 42) - 1, (1u << 28) - 1, (1u << 28) - 1, 1023, 1023, 1023};
  const auto w = encode(max);
  EXPECT_EQ(w.lo, ~0ull);
  EXPECT_EQ(w.hi, ~0ull);
  EXPECT_EQ(decode(w), max);
}

TEST(WalkCodec, SingleFieldBitPositions) {
  WalkFields f;
  f.pre_offset = 1;
  EXPECT_EQ(encode(f), (Walk128{1ull << 42, 0}));
  f = {};
  f.cur_offset = 1;
  EXPECT_EQ(encode(f), (Walk128{0, 1ull << 6}));
  f = {};
  f.pre_offset = (1u << 28) - 1;
  EXPECT_EQ(encode(f), (Walk128{0x3FFFFFull << 42, 0x3Full}));
  f = {};
  f.hop = 1;
  EXPECT_EQ(encode(f), (Walk128{0, 1ull << 54}));
}

TEST(WalkCodec, OverflowingFieldsThrow) {
  auto bad = [](auto mutate) {
    WalkFields f;
    mutate(f);
    return f;
  };
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.source = 1ull << 42; })), std::out_of_range);
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.pre_offset = 1u << 28; })), std::out_of_range);
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.cur_offset = 1u << 28; })), std::out_of_range);
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.pre_block = 1024; })), std::out_of_range);
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.cur_block = 1024; })), std::out_of_range);
  EXPECT_THROW(encode(bad([](WalkFields& f) { f.hop = 1024; })), std::out_of_range);
}

TEST(WalkCodec, GlobalVertex) {
  const std::vector<vertex_t> starts{0, 3, 6, 8};
  EXPECT_EQ(global_vertex(0, 0, starts), 0u);
  EXPECT_EQ(global_vertex(2, 1, starts), 5u);
  EXPECT_EQ(global_vertex(1, 2, starts), 7u);
  EXPECT_THROW(global_vertex(2, 2, starts), std::out_of_range);
  EXPECT_THROW(global_vertex(0, 3, starts), std::out_of_range);
}

TEST(Kernels, ExtractBlocksAgreesAcrossIsas) {
  std::mt19937_64 gen(3);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u}) {
    std::vector<Walk128> walks;
    std::vector<WalkFields> fields;
    for (std::size_t k = 0; k < n; ++k) {
      fields.push_back(random_fields(gen));
      walks.push_back(encode(fields.back()));
    }
    std::vector<block_t> pre_s(n), cur_s(n), pre_v(n), cur_v(n), pre_d(n), cur_d(n);
    simd::scalar::extract_blocks(walks, pre_s.data(), cur_s.data());
    simd::extract_blocks(walks, pre_d.data(), cur_d.data());
    for (std::size_t k = 0; k < n; ++k) {
      ASSERT_EQ(pre_s[k], fields[k].pre_block);
      ASSERT_EQ(cur_s[k], fields[k].cur_block);
    }
    EXPECT_EQ(pre_d, pre_s);
    EXPECT_EQ(cur_d, cur_s);
    if (simd::avx2_supported()) {
      simd::avx2::extract_blocks(walks, pre_v.data(), cur_v.data());
      EXPECT_EQ(pre_v, pre_s) << "n=" << n;
      EXPECT_EQ(cur_v, cur_s) << "n=" << n;
    }
  }
}

std::vector<vertex_t> random_sorted_set(std::mt19937_64& gen, std::size_t size, vertex_t universe) {
  std::vector<vertex_t> v;
  for (std::size_t k = 0; k < size; ++k) v.push_back(gen() % universe);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

TEST(Kernels, ClassifyHopsAgreesAcrossIsas) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 3000; ++trial) {
    const vertex_t universe = 4 + gen() % 200;
    auto vn = random_sorted_set(gen, gen() % 70, universe);
    auto un = random_sorted_set(gen, gen() % 70, universe);
    const vertex_t u = gen() % universe;
    std::vector<std::uint8_t> expect(vn.size()), scalar(vn.size()), dispatched(vn.size()), vec(vn.size());
    for (std::size_t k = 0; k < vn.size(); ++k) {
      expect[k] = vn[k] == u ? 0 : std::binary_search(un.begin(), un.end(), vn[k]) ? 1 : 2;
    }
    simd::scalar::classify_hops(u, vn, un, scalar.data());
    simd::classify_hops(u, vn, un, dispatched.data());
    ASSERT_EQ(scalar, expect);
    ASSERT_EQ(dispatched, expect);
    if (simd::avx2_supported()) {
      simd::avx2::classify_hops(u, vn, un, vec.data());
      ASSERT_EQ(vec, expect) << "trial " << trial;
    }
  }
}

TEST(Kernels, ClassifyHopsHandlesLargeIds) {
  const vertex_t big = (1ull << 41) + 5;
  std::vector<vertex_t> vn{1, big, big + 1, big + 2, big + 3, big + 9};
  std::vector<vertex_t> un{0, big + 1, big + 3, big + 4};
  std::vector<std::uint8_t> out(vn.size());
  simd::classify_hops(big, vn, un, out.data());
  EXPECT_EQ(out, (std::vector<std::uint8_t>{2, 0, 1, 2, 1, 2}));
}

TEST(Kernels, IsaNames) {
  EXPECT_STREQ(simd::isa_name(simd::Isa::Scalar), "scalar");
  EXPECT_STREQ(simd::isa_name(simd::Isa::Avx2), "avx2");
  if (!simd::avx2_supported()) {
    EXPECT_EQ(simd::active_isa(), simd::Isa::Scalar);
  }
}

}  // namespace
}  // namespace grasorw
