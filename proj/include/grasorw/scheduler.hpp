#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "grasorw/walk_manager.hpp"

namespace grasorw {

enum class SchedulerKind : std::uint8_t { Iteration, Alphabet, MinHeight, MaxSum, GWMix };

std::string to_string(SchedulerKind k);
SchedulerKind parse_scheduler(std::string_view name);

/// Picks the next current block from the pool state.
class Scheduler {
 public:
  /// `range` is the number of candidate blocks for the cyclic strategies.
  Scheduler(SchedulerKind kind, block_t range, std::uint64_t seed = 0, double mix_prob = 0.8);

  /// nullopt once every pool is empty.
  std::optional<block_t> next(const WalkPools& pools);

  SchedulerKind kind() const { return kind_; }

  static std::optional<block_t> max_sum(const WalkPools& pools);
  static std::optional<block_t> min_height(const WalkPools& pools);

 private:
  SchedulerKind kind_;
  block_t range_;
  std::uint64_t seed_;
  double mix_prob_;
  block_t position_ = 0;
  std::uint64_t draws_ = 0;
};

}  // namespace grasorw
