#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "grasorw/trajectory.hpp"
#include "grasorw/transition.hpp"

namespace grasorw {

/// Node2vec walks from every non-isolated vertex.
struct RwnvTask {
  std::uint64_t walks_per_vertex = 10;
  std::uint32_t length = 80;
  double p = 1.0;
  double q = 1.0;
};

/// Second-order personalized PageRank by endpoint sampling.
struct PrnvTask {
  std::vector<vertex_t> query_nodes;
  double decay = 0.85;
  std::uint32_t max_length = 20;
  std::optional<std::uint64_t> samples_per_query;  // default 4 * |V|
  double p = 1.0;
  double q = 1.0;
};

/// First-order walks from every non-isolated vertex.
struct DeepWalkTask {
  std::uint64_t walks_per_vertex = 10;
  std::uint32_t length = 80;
};

using TaskSpec = std::variant<RwnvTask, PrnvTask, DeepWalkTask>;

struct TaskPlan {
  WalkModel model;
  Termination termination;
  std::vector<WalkStart> starts;
};

/// `degrees` has one entry per vertex.
TaskPlan plan_task(const TaskSpec& task, std::span<const std::uint64_t> degrees);

struct PprEstimate {
  vertex_t query = 0;
  std::map<vertex_t, std::uint64_t> visit_counts;
  std::uint64_t total_samples = 0;

  /// Highest counts first; ties broken by vertex id.
  std::vector<std::pair<vertex_t, std::uint64_t>> top(std::size_t k) const;
};

std::vector<PprEstimate> ppr_estimates(const EndpointCounter& counter, std::span<const vertex_t> queries);
nlohmann::json ppr_to_json(std::span<const PprEstimate> estimates, std::size_t top_k);

}  // namespace grasorw
