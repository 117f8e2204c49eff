#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "grasorw/types.hpp"
#include "grasorw/walk_codec.hpp"

namespace grasorw {

/// Which pool a persisted walk belongs to.
enum class PoolLaw : std::uint8_t {
  Skewed,        // min(pre_block, cur_block)
  CurrentBlock,  // cur_block
};

block_t pool_for(const Walk128& w, PoolLaw law);

/// Per-block walk pools. Each pool keeps an in-memory segment and spills it to
/// `<dir>/pool_<k>.bin` once the segment reaches the flush threshold.
/// Not thread-safe: callers mutate pools only between parallel phases.
class WalkPools {
 public:
  static constexpr std::size_t kDefaultFlushThreshold = 64 * 1024;

  WalkPools(std::filesystem::path dir, block_t block_count, PoolLaw law,
            std::size_t flush_threshold = kDefaultFlushThreshold);
  ~WalkPools();

  WalkPools(const WalkPools&) = delete;
  WalkPools& operator=(const WalkPools&) = delete;

  /// Adds `w` to pool `block`. Throws std::logic_error when the pool law
  /// names another pool or when pre and cur blocks coincide.
  void associate_with_block(const Walk128& w, block_t block);
  void append(block_t block, std::span<const Walk128> walks);

  /// Drains pool `block` (disk records first, then the memory segment).
  std::vector<Walk128> load_walks(block_t block);

  /// Visits every stored walk of one pool without draining it.
  void scan(block_t block, const std::function<void(const Walk128&)>& fn) const;

  std::size_t size(block_t block) const { return pools_[block].count; }
  std::size_t memory_size(block_t block) const { return pools_[block].memory.size(); }
  std::size_t total() const { return total_; }
  /// Smallest hop among the pool's walks; kMaxHops when empty.
  hop_t min_hop(block_t block) const { return pools_[block].min_hop; }

  block_t block_count() const { return static_cast<block_t>(pools_.size()); }
  PoolLaw law() const { return law_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::size_t flush_threshold() const { return flush_threshold_; }

  std::uint64_t load_bytes() const { return load_bytes_; }
  std::uint64_t flush_bytes() const { return flush_bytes_; }

 private:
  struct Pool {
    std::vector<Walk128> memory;
    std::size_t on_disk = 0;
    std::size_t count = 0;
    hop_t min_hop = kMaxHops;
  };

  std::filesystem::path file(block_t block) const;
  void flush(block_t block);
  void check(const Walk128& w, block_t block) const;

  std::filesystem::path dir_;
  PoolLaw law_;
  std::size_t flush_threshold_;
  std::vector<Pool> pools_;
  std::size_t total_ = 0;
  std::uint64_t load_bytes_ = 0;
  std::uint64_t flush_bytes_ = 0;
};

/// Append-only per-thread staging area, one list per target id.
class ThreadBuffer {
 public:
  explicit ThreadBuffer(block_t targets = 0) : lists_(targets) {}

  void append(block_t target, const Walk128& w) { lists_[target].push_back(w); }
  std::vector<Walk128>& at(block_t target) { return lists_[target]; }
  const std::vector<Walk128>& at(block_t target) const { return lists_[target]; }
  block_t targets() const { return static_cast<block_t>(lists_.size()); }
  std::size_t size() const;

 private:
  std::vector<std::vector<Walk128>> lists_;
};

/// Moves every buffered walk for `target` into `dst` and clears those lists.
void merge_buffers_into_bucket(std::span<ThreadBuffer> buffers, block_t target, std::vector<Walk128>& dst);

/// Drains every target of every buffer into the pool with the same id.
void merge_buffers_into_pools(std::span<ThreadBuffer> buffers, WalkPools& pools);

enum class BucketRule : std::uint8_t {
  Triangular,  // partner block of the pair, always above the current block
  PlainBucket  // previous block; the current block owns every walk
};

/// Groups the current block's walks by partner block. Result has one entry
/// per block. Throws std::logic_error for walks that do not touch `b` or
/// whose two blocks coincide.
std::vector<std::vector<Walk128>> collect_buckets(std::span<const Walk128> walks, block_t b, block_t block_count,
                                                  BucketRule rule = BucketRule::Triangular);

}  // namespace grasorw
