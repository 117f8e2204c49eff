#include <gtest/gtest.h>

#include "grasorw/scheduler.hpp"
#include "support.hpp"

namespace grasorw {
namespace {

using testing::TempDir;

Walk128 walk(block_t pre, block_t cur, hop_t hop) {
  WalkFields f;
  f.pre_block = pre;
  f.cur_block = cur;
  f.hop = hop;
  return encode(f);
}

// Pools keyed by current block: {0: 5 walks, 1: none, 2: 7 walks}.
class SchedulerPools : public ::testing::Test {
 protected:
  SchedulerPools() : pools_(tmp_.path(), 3, PoolLaw::CurrentBlock) {
    for (int k = 0; k < 5; ++k) pools_.associate_with_block(walk(1, 0, 4), 0);
    for (int k = 0; k < 7; ++k) pools_.associate_with_block(walk(0, 2, 9), 2);
  }
  TempDir tmp_;
  WalkPools pools_;
};

TEST_F(SchedulerPools, IterationSkipsEmptyPools) {
  Scheduler s(SchedulerKind::Iteration, 3);
  EXPECT_EQ(s.next(pools_), 0u);
  EXPECT_EQ(s.next(pools_), 2u);
  EXPECT_EQ(s.next(pools_), 0u);
}

TEST_F(SchedulerPools, AlphabetVisitsEveryBlock) {
  Scheduler s(SchedulerKind::Alphabet, 3);
  EXPECT_EQ(s.next(pools_), 0u);
  EXPECT_EQ(s.next(pools_), 1u);
  EXPECT_EQ(s.next(pools_), 2u);
  EXPECT_EQ(s.next(pools_), 0u);
}

TEST_F(SchedulerPools, MaxSumAndMinHeight) {
  EXPECT_EQ(Scheduler(SchedulerKind::MaxSum, 3).next(pools_), 2u);
  EXPECT_EQ(Scheduler(SchedulerKind::MinHeight, 3).next(pools_), 0u);
}

TEST_F(SchedulerPools, MixFollowsItsProbability) {
  Scheduler s(SchedulerKind::GWMix, 3, 99, 0.8);
  int max_sum = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) max_sum += *s.next(pools_) == 2;
  EXPECT_NEAR(max_sum / double(n), 0.8, 0.02);
}

TEST(Scheduler, EmptyPoolsAreDone) {
  TempDir tmp;
  WalkPools pools(tmp.path(), 3, PoolLaw::Skewed);
  for (auto k : {SchedulerKind::Iteration, SchedulerKind::Alphabet, SchedulerKind::MinHeight, SchedulerKind::MaxSum,
                 SchedulerKind::GWMix}) {
    EXPECT_FALSE(Scheduler(k, 2).next(pools).has_value()) << to_string(k);
  }
}

TEST(Scheduler, NamesRoundTrip) {
  for (auto k : {SchedulerKind::Iteration, SchedulerKind::Alphabet, SchedulerKind::MinHeight, SchedulerKind::MaxSum,
                 SchedulerKind::GWMix}) {
    EXPECT_EQ(parse_scheduler(to_string(k)), k);
  }
  EXPECT_THROW(parse_scheduler("fifo"), std::invalid_argument);
  EXPECT_THROW(Scheduler(SchedulerKind::Iteration, 0), std::invalid_argument);
  EXPECT_THROW(Scheduler(SchedulerKind::GWMix, 2, 0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace grasorw
