#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "grasorw/graph_store.hpp"

namespace grasorw {

struct Edge {
  vertex_t src;
  vertex_t dst;
};

struct EdgeList {
  std::vector<Edge> edges;
  vertex_t vertex_count = 0;  // 1 + largest id seen
};

/// Symmetric CSR held in memory.
struct CsrGraph {
  std::vector<std::uint64_t> offsets;  // vertex_count + 1
  std::vector<vertex_t> neighbors;

  vertex_t vertex_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::uint64_t degree(vertex_t v) const { return offsets[v + 1] - offsets[v]; }
  AdjacencySlice adjacency(vertex_t v) const {
    return {v, {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]}};
  }
};

/// Stores every edge in both directions, drops self-loops and duplicates and
/// sorts each neighbor list. `n` must exceed every endpoint.
CsrGraph build_csr(std::vector<Edge> edges, vertex_t n);

/// Parses "src dst" lines; blank lines and lines starting with '#' are
/// skipped. Errors carry the 1-based line number.
EdgeList read_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path, const EdgeList& list);

struct PartitionOptions {
  std::uint64_t block_size = 16ull << 20;
  unsigned id_width = 4;
};

/// Symmetrizes, drops self-loops and duplicate edges, then cuts ID-contiguous
/// blocks whose CSR bytes (8-byte offset per vertex plus neighbor ids) fit
/// block_size. A vertex that alone exceeds block_size gets its own block.
GraphStore partition_sequential(const std::filesystem::path& edge_list, const std::filesystem::path& out_dir,
                                const PartitionOptions& opts);
GraphStore partition_sequential(EdgeList edges, const std::filesystem::path& out_dir, const PartitionOptions& opts);

/// Builds a store from an external vertex→block assignment ("vertex block"
/// lines). Vertices are renumbered so each block is a contiguous id range;
/// vertex_remap.bin records the original id of every new id.
GraphStore import_partition(const std::filesystem::path& edge_list, const std::filesystem::path& block_file,
                            const std::filesystem::path& out_dir, unsigned id_width = 4);

/// Reads vertex_remap.bin (new id -> original id).
std::vector<vertex_t> read_vertex_remap(const std::filesystem::path& dir);

}  // namespace grasorw
