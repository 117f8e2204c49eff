#include "grasorw/walk_manager.hpp"

#include <algorithm>
#include <string>

#include <fmt/format.h>

#include "grasorw/io.hpp"
#include "grasorw/kernels.hpp"

namespace grasorw {

namespace fs = std::filesystem;

block_t pool_for(const Walk128& w, PoolLaw law) {
  return law == PoolLaw::Skewed ? std::min(w.pre_block(), w.cur_block()) : w.cur_block();
}

WalkPools::WalkPools(fs::path dir, block_t block_count, PoolLaw law, std::size_t flush_threshold)
    : dir_(std::move(dir)), law_(law), flush_threshold_(std::max<std::size_t>(flush_threshold, 1)), pools_(block_count) {
  fs::create_directories(dir_);
  for (block_t k = 0; k < block_count; ++k) {
    std::error_code ec;
    fs::remove(file(k), ec);
  }
}

WalkPools::~WalkPools() {
  for (block_t k = 0; k < pools_.size(); ++k) {
    if (pools_[k].on_disk == 0) continue;
    std::error_code ec;
    fs::remove(file(k), ec);
  }
}

fs::path WalkPools::file(block_t block) const { return dir_ / fmt::format("pool_{}.bin", block); }

void WalkPools::check(const Walk128& w, block_t block) const {
  if (block >= pools_.size()) throw std::out_of_range(fmt::format("pool {} out of range", block));
  if (w.pre_block() == w.cur_block()) {
    throw std::logic_error(fmt::format("walk with both endpoints in block {} cannot be persisted", w.cur_block()));
  }
  if (pool_for(w, law_) != block) {
    throw std::logic_error(fmt::format("walk with blocks ({}, {}) does not belong to pool {}", w.pre_block(),
                                       w.cur_block(), block));
  }
}

void WalkPools::associate_with_block(const Walk128& w, block_t block) { append(block, {&w, 1}); }

void WalkPools::append(block_t block, std::span<const Walk128> walks) {
  if (walks.empty()) return;
  auto& pool = pools_.at(block);
  for (const auto& w : walks) {
    check(w, block);
    pool.min_hop = std::min(pool.min_hop, w.hop());
  }
  pool.memory.insert(pool.memory.end(), walks.begin(), walks.end());
  pool.count += walks.size();
  total_ += walks.size();
  if (pool.memory.size() >= flush_threshold_) flush(block);
}

void WalkPools::flush(block_t block) {
  auto& pool = pools_[block];
  io::FileWriter w(file(block), /*append=*/true);
  for (const auto& rec : pool.memory) {
    w.put(rec.lo);
    w.put(rec.hi);
  }
  w.close();
  flush_bytes_ += pool.memory.size() * sizeof(Walk128);
  pool.on_disk += pool.memory.size();
  pool.memory.clear();
}

std::vector<Walk128> WalkPools::load_walks(block_t block) {
  auto& pool = pools_.at(block);
  std::vector<Walk128> out;
  out.reserve(pool.count);
  if (pool.on_disk > 0) {
    const auto raw = io::read_file(file(block));
    if (raw.size() % sizeof(Walk128) != 0 || raw.size() / sizeof(Walk128) != pool.on_disk) {
      throw Error(fmt::format("{}: corrupt pool file ({} bytes)", file(block).string(), raw.size()));
    }
    for (std::size_t k = 0; k < raw.size(); k += sizeof(Walk128)) {
      out.push_back({io::load_le<std::uint64_t>(raw.data() + k), io::load_le<std::uint64_t>(raw.data() + k + 8)});
    }
    fs::remove(file(block));
  }
  out.insert(out.end(), pool.memory.begin(), pool.memory.end());
  std::vector<Walk128>().swap(pool.memory);
  load_bytes_ += out.size() * sizeof(Walk128);
  total_ -= pool.count;
  pool = Pool{};
  return out;
}

void WalkPools::scan(block_t block, const std::function<void(const Walk128&)>& fn) const {
  const auto& pool = pools_.at(block);
  if (pool.on_disk > 0) {
    const auto raw = io::read_file(file(block));
    if (raw.size() % sizeof(Walk128) != 0) {
      throw Error(fmt::format("{}: corrupt pool file ({} bytes)", file(block).string(), raw.size()));
    }
    for (std::size_t k = 0; k < raw.size(); k += sizeof(Walk128)) {
      fn(Walk128{io::load_le<std::uint64_t>(raw.data() + k), io::load_le<std::uint64_t>(raw.data() + k + 8)});
    }
  }
  for (const auto& w : pool.memory) fn(w);
}

std::size_t ThreadBuffer::size() const {
  std::size_t n = 0;
  for (const auto& l : lists_) n += l.size();
  return n;
}

void merge_buffers_into_bucket(std::span<ThreadBuffer> buffers, block_t target, std::vector<Walk128>& dst) {
  for (auto& buf : buffers) {
    auto& list = buf.at(target);
    dst.insert(dst.end(), list.begin(), list.end());
    list.clear();
  }
}

void merge_buffers_into_pools(std::span<ThreadBuffer> buffers, WalkPools& pools) {
  for (auto& buf : buffers) {
    for (block_t k = 0; k < buf.targets(); ++k) {
      auto& list = buf.at(k);
      pools.append(k, list);
      list.clear();
    }
  }
}

std::vector<std::vector<Walk128>> collect_buckets(std::span<const Walk128> walks, block_t b, block_t block_count,
                                                  BucketRule rule) {
  std::vector<block_t> pre(walks.size()), cur(walks.size());
  simd::extract_blocks(walks, pre.data(), cur.data());
  std::vector<std::vector<Walk128>> buckets(block_count);
  for (std::size_t k = 0; k < walks.size(); ++k) {
    const block_t p = pre[k], c = cur[k];
    if (p == c) throw std::logic_error(fmt::format("walk has both endpoints in block {}", c));
    block_t target = 0;
    if (rule == BucketRule::Triangular) {
      if (p != b && c != b) throw std::logic_error(fmt::format("walk ({}, {}) does not touch block {}", p, c, b));
      target = p == b ? c : p;
      if (target < b) throw std::logic_error(fmt::format("walk ({}, {}) breaks the skewed law for block {}", p, c, b));
    } else {
      if (c != b) throw std::logic_error(fmt::format("walk with current block {} in pool {}", c, b));
      target = p;
    }
    if (target >= block_count) throw std::out_of_range(fmt::format("walk references block {}", target));
    buckets[target].push_back(walks[k]);
  }
  return buckets;
}

}  // namespace grasorw
