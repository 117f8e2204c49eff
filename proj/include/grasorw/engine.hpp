#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "grasorw/graph_store.hpp"
#include "grasorw/loader_model.hpp"
#include "grasorw/scheduler.hpp"
#include "grasorw/trajectory.hpp"
#include "grasorw/transition.hpp"
#include "grasorw/walk_manager.hpp"

namespace grasorw {

enum class EngineMode : std::uint8_t { Triangular, PlainBucket };
enum class LoadingPolicy : std::uint8_t { AlwaysFull, AlwaysOnDemand, Learned };

std::string to_string(EngineMode m);
std::string to_string(LoadingPolicy p);
EngineMode parse_engine_mode(std::string_view name);
LoadingPolicy parse_loading_policy(std::string_view name);

struct UtilizationSample {
  std::uint64_t slot = 0;
  block_t current = 0;
  block_t ancillary = 0;
  LoadMode mode = LoadMode::Full;
  std::uint64_t walks = 0;
  std::uint64_t loaded_bytes = 0;
  std::uint64_t touched_bytes = 0;

  /// 1.0 when nothing was loaded.
  double ratio() const {
    return loaded_bytes == 0 ? 1.0 : static_cast<double>(touched_bytes) / static_cast<double>(loaded_bytes);
  }
};

struct Metrics {
  // Graph I/O, as counted by the store during the run.
  std::uint64_t block_io_count = 0;
  std::uint64_t block_io_bytes = 0;
  std::uint64_t ondemand_io_count = 0;
  std::uint64_t ondemand_io_bytes = 0;
  std::uint64_t vertex_io_count = 0;
  std::uint64_t vertex_io_bytes = 0;
  // Walk pool traffic.
  std::uint64_t walk_io_bytes = 0;
  std::uint64_t walk_flush_bytes = 0;

  std::uint64_t steps_sampled = 0;
  std::uint64_t walks_started = 0;
  std::uint64_t walks_finished = 0;

  std::uint64_t time_slots = 0;
  std::uint64_t sweeps = 0;
  std::uint64_t init_block_loads = 0;
  std::uint64_t current_block_loads = 0;
  std::uint64_t ancillary_full_loads = 0;
  std::uint64_t ancillary_ondemand_loads = 0;
  /// Current plus ancillary loads of each sweep, in order.
  std::vector<std::uint64_t> sweep_block_loads;
  std::vector<UtilizationSample> io_utilization;

  double wall_seconds = 0;
  double init_seconds = 0;
  double load_seconds = 0;
  double execute_seconds = 0;

  /// Every block load of the run, full or partial, initialization included.
  std::uint64_t block_loads() const {
    return init_block_loads + current_block_loads + ancillary_full_loads + ancillary_ondemand_loads;
  }

  nlohmann::json to_json() const;
};

/// State handed to the slot hook after each time slot, once all buffers have
/// been merged into the pools.
struct SlotInfo {
  bool initialization = false;  // reported once, after the initial pass
  std::uint64_t slot = 0;
  block_t current = 0;
  std::span<const block_t> ancillary;  // blocks loaded as ancillary, in order
  bool sweep_completed = false;
  std::uint64_t sweeps = 0;  // completed sweeps so far
  const WalkPools* pools = nullptr;
  std::uint64_t walks_started = 0;
  std::uint64_t walks_finished = 0;
};

using SlotHook = std::function<void(const SlotInfo&)>;
/// Maps a measured load sample to the time that gets logged.
using TimingHook = std::function<double(const LoadSample&)>;

struct EngineConfig {
  WalkModel model;
  Termination termination = Termination::fixed(80);
  /// Unset picks Iteration for Triangular and GWMix for PlainBucket.
  std::optional<SchedulerKind> scheduler;
  double gwmix_prob = 0.8;
  EngineMode mode = EngineMode::Triangular;
  LoadingPolicy loading = LoadingPolicy::AlwaysFull;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  /// Keys every draw by (seed, source, walk index, hop) so output does not
  /// depend on scheduling, threads or loading mode.
  bool deterministic = false;

  /// Directory for pool files; empty means a temporary directory removed
  /// after the run.
  std::filesystem::path work_dir;
  std::size_t flush_threshold = WalkPools::kDefaultFlushThreshold;

  const LoaderModel* loader = nullptr;  // required for Learned
  SampleLog* samples = nullptr;         // receives one sample per ancillary load
  TimingHook timing;
  WalkSink* sink = nullptr;
  SlotHook on_slot;

  SchedulerKind effective_scheduler() const;
  void validate() const;
};

/// Where a walk goes after leaving the two resident blocks.
struct Route {
  enum class Kind : std::uint8_t { Pool, Bucket };
  Kind kind = Kind::Pool;
  block_t target = 0;

  friend bool operator==(const Route&, const Route&) = default;
};

/// `pre_block` must be `b` or `i`; `cur_block` must be neither.
Route route_exit(EngineMode mode, block_t b, block_t i, block_t pre_block, block_t cur_block);

Metrics run(const GraphStore& store, std::span<const WalkStart> starts, const EngineConfig& cfg);

}  // namespace grasorw
