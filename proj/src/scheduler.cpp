#include "grasorw/scheduler.hpp"

#include <stdexcept>

#include "grasorw/rng.hpp"

namespace grasorw {

std::string to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Iteration: return "iteration";
    case SchedulerKind::Alphabet: return "alphabet";
    case SchedulerKind::MinHeight: return "minheight";
    case SchedulerKind::MaxSum: return "maxsum";
    case SchedulerKind::GWMix: return "gwmix";
  }
  return "?";
}

SchedulerKind parse_scheduler(std::string_view name) {
  for (auto k : {SchedulerKind::Iteration, SchedulerKind::Alphabet, SchedulerKind::MinHeight, SchedulerKind::MaxSum,
                 SchedulerKind::GWMix}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown scheduler '" + std::string(name) + "'");
}

Scheduler::Scheduler(SchedulerKind kind, block_t range, std::uint64_t seed, double mix_prob)
    : kind_(kind), range_(range), seed_(seed), mix_prob_(mix_prob) {
  if (range_ == 0) throw std::invalid_argument("scheduler range must be positive");
  if (kind_ == SchedulerKind::GWMix && !(mix_prob_ > 0.0 && mix_prob_ < 1.0)) {
    throw std::invalid_argument("mix probability must lie in (0, 1)");
  }
}

std::optional<block_t> Scheduler::max_sum(const WalkPools& pools) {
  std::optional<block_t> best;
  for (block_t k = 0; k < pools.block_count(); ++k) {
    if (pools.size(k) > 0 && (!best || pools.size(k) > pools.size(*best))) best = k;
  }
  return best;
}

std::optional<block_t> Scheduler::min_height(const WalkPools& pools) {
  std::optional<block_t> best;
  for (block_t k = 0; k < pools.block_count(); ++k) {
    if (pools.size(k) > 0 && (!best || pools.min_hop(k) < pools.min_hop(*best))) best = k;
  }
  return best;
}

std::optional<block_t> Scheduler::next(const WalkPools& pools) {
  if (pools.total() == 0) return std::nullopt;
  switch (kind_) {
    case SchedulerKind::Iteration:
      for (block_t step = 0; step < range_; ++step) {
        const block_t c = (position_ + step) % range_;
        if (pools.size(c) > 0) {
          position_ = (c + 1) % range_;
          return c;
        }
      }
      throw std::logic_error("walks stored outside the scheduler's block range");
    case SchedulerKind::Alphabet: {
      const block_t c = position_;
      position_ = (position_ + 1) % range_;
      return c;
    }
    case SchedulerKind::MinHeight: return min_height(pools);
    case SchedulerKind::MaxSum: return max_sum(pools);
    case SchedulerKind::GWMix: {
      const double u = draw_unit(RngKey{seed_, 0, draws_++, 0}, Stream::Schedule);
      return u < mix_prob_ ? max_sum(pools) : min_height(pools);
    }
  }
  return std::nullopt;
}

}  // namespace grasorw
