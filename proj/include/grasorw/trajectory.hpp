#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "grasorw/types.hpp"

namespace grasorw {

/// `walk_count` walks start at `source`.
struct WalkStart {
  vertex_t source = 0;
  std::uint64_t walk_count = 1;
};

/// Numbers walks 0..total-1 in start-list order and maps a walk id back to
/// its source and its index among that start's walks.
class WalkStartTable {
 public:
  struct Entry {
    vertex_t source;
    std::uint64_t walk_index;
  };

  WalkStartTable() = default;
  explicit WalkStartTable(std::span<const WalkStart> starts);

  std::uint64_t total() const { return prefix_.empty() ? 0 : prefix_.back(); }
  Entry lookup(std::uint64_t walk_id) const;
  std::span<const WalkStart> starts() const { return starts_; }

 private:
  std::vector<WalkStart> starts_;
  std::vector<std::uint64_t> prefix_;  // starts_.size() + 1 entries
};

/// Receives walk output from the engine and the oracle. Calls carry the
/// worker index so implementations can keep per-thread state without locks.
class WalkSink {
 public:
  virtual ~WalkSink() = default;

  virtual void begin(std::uint64_t /*walk_count*/, unsigned /*threads*/) {}
  virtual bool wants_fragments() const { return false; }
  /// A contiguous piece of one walk: `vertices[0]` is the vertex at
  /// `start_hop`. Successive fragments of a walk overlap by one vertex.
  virtual void fragment(unsigned /*thread*/, std::uint64_t /*walk_id*/, hop_t /*start_hop*/,
                        std::span<const vertex_t> /*vertices*/) {}
  virtual void finish(unsigned /*thread*/, std::uint64_t /*walk_id*/, vertex_t /*source*/, vertex_t /*endpoint*/) {}
  virtual void end() {}
};

class NullSink final : public WalkSink {};

struct Trajectory {
  vertex_t source = 0;
  std::vector<vertex_t> vertices;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Reassembles full trajectories, indexed by walk id.
class TrajectoryCollector final : public WalkSink {
 public:
  void begin(std::uint64_t walk_count, unsigned threads) override;
  bool wants_fragments() const override { return true; }
  void fragment(unsigned thread, std::uint64_t walk_id, hop_t start_hop, std::span<const vertex_t> vertices) override;
  void end() override;

  const std::vector<Trajectory>& trajectories() const { return result_; }
  std::vector<Trajectory> take() { return std::move(result_); }

 private:
  struct Piece {
    std::uint64_t walk_id;
    hop_t start_hop;
    std::uint64_t offset;
    std::uint32_t length;
  };
  struct PerThread {
    std::vector<Piece> pieces;
    std::vector<vertex_t> vertices;
  };

  std::uint64_t walk_count_ = 0;
  std::vector<PerThread> threads_;
  std::vector<Trajectory> result_;
};

/// Counts walk endpoints per source vertex.
class EndpointCounter final : public WalkSink {
 public:
  using Counts = std::unordered_map<vertex_t, std::uint64_t>;

  void begin(std::uint64_t walk_count, unsigned threads) override;
  void finish(unsigned thread, std::uint64_t walk_id, vertex_t source, vertex_t endpoint) override;
  void end() override;

  const std::map<vertex_t, Counts>& counts() const { return merged_; }
  std::uint64_t total(vertex_t source) const;

 private:
  std::vector<std::map<vertex_t, Counts>> threads_;
  std::map<vertex_t, Counts> merged_;
};

/// Record stream: source u64, length u32, then `length` ids of `id_width`
/// bytes, all little-endian.
std::vector<unsigned char> encode_trajectories(std::span<const Trajectory> trajectories, unsigned id_width);
void write_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajectories,
                        unsigned id_width);
std::vector<Trajectory> read_trajectories(const std::filesystem::path& path, unsigned id_width);

}  // namespace grasorw
