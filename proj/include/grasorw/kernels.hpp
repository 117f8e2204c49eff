#pragma once

#include <cstdint>
#include <span>

#include "grasorw/types.hpp"
#include "grasorw/walk_codec.hpp"

namespace grasorw::simd {

enum class Isa { Scalar, Avx2 };

/// Instruction set picked at startup: AVX2 when the CPU reports it, unless
/// GRASORW_SIMD=scalar is set in the environment.
Isa active_isa();
const char* isa_name(Isa isa);
bool avx2_supported();

/// For each neighbor z of the current vertex, writes 0 if z == u, 1 if z is a
/// neighbor of u, 2 otherwise. Both neighbor lists must be sorted ascending.
void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out);

/// Writes pre_block and cur_block of every record.
void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur);

namespace scalar {
void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out);
void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur);
}  // namespace scalar

namespace avx2 {
// Callers must check avx2_supported() first.
void classify_hops(vertex_t u, std::span<const vertex_t> v_nbrs, std::span<const vertex_t> u_nbrs,
                   std::uint8_t* out);
void extract_blocks(std::span<const Walk128> walks, block_t* pre, block_t* cur);
}  // namespace avx2

}  // namespace grasorw::simd
