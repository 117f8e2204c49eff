#include "grasorw/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

namespace grasorw::simd {

namespace scalar {

void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out) {
  for (std::size_t k = 0; k < v_nbrs.size(); ++k) {
    const vertex_t z = v_nbrs[k];
    if (z == u) {
      out[k] = 0;
    } else {
      out[k] = std::binary_search(u_nbrs.begin(), u_nbrs.end(), z) ? 1 : 2;
    }
  }
}

void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur) {
  for (std::size_t k = 0; k < walks.size(); ++k) {
    pre[k] = walks[k].pre_block();
    cur[k] = walks[k].cur_block();
  }
}

}  // namespace scalar

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("GRASORW_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

struct Table {
  decltype(&scalar::classify_hops) classify;
  decltype(&scalar::extract_blocks) extract;
};

const Table& table() {
  static const Table t = [] {
    if (detect() == Isa::Avx2) return Table{&avx2::classify_hops, &avx2::extract_blocks};
    return Table{&scalar::classify_hops, &scalar::extract_blocks};
  }();
  return t;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out) {
  table().classify(u, v_nbrs, u_nbrs, out);
}

void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur) {
  table().extract(walks, pre, cur);
}

}  // namespace grasorw::simd
