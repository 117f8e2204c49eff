#pragma once

#include <cstdint>

#include "grasorw/partition.hpp"

namespace grasorw::synthetic {

/// G(n, p) with p = avg_degree / (n - 1), sampled by geometric skipping.
EdgeList erdos_renyi(vertex_t n, double avg_degree, std::uint64_t seed);

/// Vertex 0 joined to vertices 1..leaves.
EdgeList star(vertex_t leaves);

/// Two halves [0, n/2) and [n/2, n) with edge probability p_in inside a half
/// and p_out across.
EdgeList two_community(vertex_t n, double p_in, double p_out, std::uint64_t seed);

}  // namespace grasorw::synthetic
