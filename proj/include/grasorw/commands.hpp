#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grasorw/engine.hpp"
#include "grasorw/graph_store.hpp"
#include "grasorw/loader_model.hpp"
#include "grasorw/partition.hpp"
#include "grasorw/tasks.hpp"

namespace grasorw::cli {

/// Byte count with an optional K/M/G suffix (powers of 1024), e.g. "16MiB".
std::uint64_t parse_size(std::string_view text);

struct PartitionArgs {
  std::filesystem::path input;
  std::filesystem::path out;
  std::filesystem::path block_file;  // custom partition when set
  std::uint64_t block_size = 16ull << 20;
  unsigned id_width = 4;
};

GraphStore cmd_partition(const PartitionArgs& args);

struct RunArgs {
  std::filesystem::path store;
  std::string task = "rwnv";  // rwnv | prnv | deepwalk
  double p = 1.0;
  double q = 1.0;
  std::uint64_t walks_per_vertex = 10;
  std::uint32_t length = 80;
  double decay = 0.85;
  std::uint32_t max_length = 20;
  std::optional<std::uint64_t> samples_per_query;
  std::filesystem::path query_nodes;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool deterministic = false;
  std::optional<std::string> scheduler;
  std::string engine = "triangular";
  std::string loading = "full";
  std::filesystem::path loader_model;  // default <store>/loader_model.json
  std::filesystem::path metrics_out;
  std::string traj_out;  // file path, "null" or empty
  std::filesystem::path ppr_out;
  std::filesystem::path work_dir;
  std::size_t flush_threshold = WalkPools::kDefaultFlushThreshold;
  std::size_t top_k = 20;
};

struct RunResult {
  Metrics metrics;
  std::vector<Trajectory> trajectories;  // walk tasks with a trajectory file only
  std::vector<PprEstimate> ppr;          // PRNV only
};

std::vector<vertex_t> read_query_nodes(const std::filesystem::path& path);
TaskSpec make_task(const RunArgs& args);

/// Runs the task on the store and writes the requested outputs.
RunResult cmd_run(const RunArgs& args);

/// Same task on the in-memory oracle. Always deterministic.
RunResult cmd_oracle(const RunArgs& args);

struct TrainResult {
  LoaderModel model;
  SampleLog samples;
  std::filesystem::path model_path;
};

/// Calibration runs with full loads and then on-demand loads, followed by
/// the fit. Writes loader_model.json and loader_samples.csv.
TrainResult cmd_train_loader(const RunArgs& args, const std::filesystem::path& model_out = {},
                             const TimingHook& timing = {});

struct BenchRow {
  std::string scheduler;
  std::string engine;
  std::uint64_t block_io_count = 0;
  std::uint64_t block_io_bytes = 0;
  std::uint64_t block_loads = 0;
  std::uint64_t time_slots = 0;
  double wall_seconds = 0;
};

/// Every scheduler under both engine modes; one CSV row per run.
std::vector<BenchRow> cmd_bench_schedulers(const RunArgs& args, std::ostream& csv);

struct GenArgs {
  std::string kind = "er";  // er | star | twocommunity
  std::uint64_t n = 1000;
  double avg_degree = 10.0;
  std::uint64_t leaves = 10;
  double p_in = 0.1;
  double p_out = 0.01;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

EdgeList cmd_gen(const GenArgs& args);

}  // namespace grasorw::cli
