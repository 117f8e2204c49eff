#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "grasorw/io.hpp"
#include "grasorw/types.hpp"

namespace grasorw {

inline constexpr char kStoreMagic[4] = {'G', 'S', 'R', 'W'};
inline constexpr std::uint32_t kStoreVersion = 1;

struct GraphMeta {
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;  // directed entries; every undirected edge appears twice
  block_t block_count = 0;
  unsigned id_width = 4;
  std::uint64_t block_size = 0;

  void validate() const;
};

/// A read-only view of one vertex's sorted neighbor list.
struct AdjacencySlice {
  vertex_t vertex = kNoVertex;
  std::span<const vertex_t> neighbors;

  std::size_t degree() const { return neighbors.size(); }
};

/// An adjacency list that owns its storage (single-vertex disk reads).
struct Adjacency {
  vertex_t vertex = kNoVertex;
  std::vector<vertex_t> neighbors;

  AdjacencySlice view() const { return {vertex, neighbors}; }
  std::size_t degree() const { return neighbors.size(); }
};

/// How loaded bytes are tallied: one offset entry per vertex plus
/// `id_bytes` per neighbor. Defaults match the on-disk widths; a store can be
/// opened with different widths to report against another layout.
struct IoAccounting {
  unsigned offset_bytes = 8;
  unsigned id_bytes = 4;

  std::uint64_t segment_bytes(std::uint64_t degree) const { return offset_bytes + degree * id_bytes; }
};

struct IoStats {
  std::uint64_t block_io_count = 0;
  std::uint64_t block_io_bytes = 0;
  std::uint64_t ondemand_io_count = 0;
  std::uint64_t ondemand_io_bytes = 0;
  std::uint64_t vertex_io_count = 0;
  std::uint64_t vertex_io_bytes = 0;

  IoStats operator-(const IoStats& o) const;
};

class GraphStore;

/// In-memory image of one block. Full images resolve every vertex of the
/// block; partial images hold the activated vertices and fetch the rest from
/// disk on first use, caching them for the image's lifetime.
class BlockData {
 public:
  BlockData(const BlockData&) = delete;
  BlockData& operator=(const BlockData&) = delete;

  block_t id() const { return id_; }
  LoadMode mode() const { return mode_; }
  vertex_t start_vertex() const { return start_; }
  vertex_t vertex_span() const { return span_; }
  bool contains(vertex_t v) const { return v >= start_ && v - start_ < span_; }

  /// Adjacency of `v`, which must belong to this block. Marks `v` touched.
  /// Partial images fetch unresolved vertices through the owning store.
  AdjacencySlice adjacency(vertex_t v) const;

  /// Adjacency of `v` if already resident; never performs I/O or marks touch.
  std::optional<AdjacencySlice> peek(vertex_t v) const;

  std::uint64_t loaded_bytes() const { return loaded_bytes_.load(std::memory_order_relaxed); }
  std::uint64_t touched_bytes() const { return touched_bytes_.load(std::memory_order_relaxed); }
  std::uint64_t neighbor_entries() const { return neighbors_.size(); }
  std::size_t resident_vertices() const;

 private:
  friend class GraphStore;
  BlockData(block_t id, LoadMode mode, vertex_t start, vertex_t span, const GraphStore* store);

  void touch(std::size_t slot, std::uint64_t degree) const;
  AdjacencySlice fetch_missing(vertex_t v) const;

  block_t id_;
  LoadMode mode_;
  vertex_t start_;
  vertex_t span_;
  const GraphStore* store_;
  IoAccounting accounting_;

  // Full: one entry per vertex of the block. Partial: one per activated vertex.
  std::vector<vertex_t> activated_;  // Partial only, sorted
  std::vector<std::uint64_t> offsets_;
  std::vector<vertex_t> neighbors_;
  std::unique_ptr<std::atomic<std::uint8_t>[]> touched_;

  mutable std::shared_mutex fetched_mu_;
  mutable std::unordered_map<vertex_t, std::unique_ptr<const std::vector<vertex_t>>> fetched_;

  mutable std::atomic<std::uint64_t> loaded_bytes_{0};
  mutable std::atomic<std::uint64_t> touched_bytes_{0};
};

/// An opened on-disk CSR store. Immutable after open apart from I/O counters;
/// all load functions may be called concurrently.
class GraphStore {
 public:
  static GraphStore open(const std::filesystem::path& dir, std::optional<IoAccounting> accounting = {});

  GraphStore(GraphStore&&) noexcept = default;
  GraphStore& operator=(GraphStore&&) noexcept = default;

  const GraphMeta& meta() const { return meta_; }
  const std::filesystem::path& dir() const { return dir_; }
  const IoAccounting& accounting() const { return accounting_; }
  block_t block_count() const { return meta_.block_count; }
  vertex_t vertex_count() const { return meta_.vertex_count; }

  /// block_count + 1 entries; the last is vertex_count.
  std::span<const vertex_t> start_vertices() const { return starts_; }
  vertex_t block_start(block_t b) const { return starts_[b]; }
  vertex_t block_span(block_t b) const { return starts_[b + 1] - starts_[b]; }

  block_t block_of(vertex_t v) const;

  std::unique_ptr<BlockData> load_block_full(block_t b) const;
  /// Loads only the segments of `activated` (duplicates allowed). Every vertex
  /// must belong to block `b`.
  std::unique_ptr<BlockData> load_block_on_demand(block_t b, std::span<const vertex_t> activated) const;
  Adjacency fetch_vertex(vertex_t v) const;

  /// Degree of every vertex, read from the index file without I/O accounting.
  std::vector<std::uint64_t> degrees() const;

  /// Bytes a full load of `b` is charged under the active accounting.
  std::uint64_t full_block_bytes(block_t b) const;

  IoStats io_stats() const;

 private:
  friend class BlockData;
  GraphStore() = default;

  std::pair<std::uint64_t, std::uint64_t> read_offsets(vertex_t v) const;
  void read_neighbors(std::uint64_t begin, std::uint64_t end, vertex_t* out) const;

  struct Counters {
    std::atomic<std::uint64_t> block_io_count{0};
    std::atomic<std::uint64_t> block_io_bytes{0};
    std::atomic<std::uint64_t> ondemand_io_count{0};
    std::atomic<std::uint64_t> ondemand_io_bytes{0};
    std::atomic<std::uint64_t> vertex_io_count{0};
    std::atomic<std::uint64_t> vertex_io_bytes{0};
  };

  std::filesystem::path dir_;
  GraphMeta meta_;
  IoAccounting accounting_;
  std::vector<vertex_t> starts_;
  io::RandomAccessFile index_;
  io::RandomAccessFile csr_;
  std::unique_ptr<Counters> counters_;
};

GraphMeta read_meta(const std::filesystem::path& dir);
void write_meta(const std::filesystem::path& dir, const GraphMeta& meta);

}  // namespace grasorw
