#include "grasorw/tasks.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace grasorw {

namespace {

std::vector<WalkStart> every_vertex(std::span<const std::uint64_t> degrees, std::uint64_t walks_per_vertex) {
  if (walks_per_vertex == 0) throw std::invalid_argument("walks per vertex must be positive");
  std::vector<WalkStart> starts;
  for (vertex_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] > 0) starts.push_back({v, walks_per_vertex});
  }
  return starts;
}

}  // namespace

TaskPlan plan_task(const TaskSpec& task, std::span<const std::uint64_t> degrees) {
  TaskPlan plan;
  if (const auto* t = std::get_if<RwnvTask>(&task)) {
    plan.model = WalkModel::node2vec(t->p, t->q);
    plan.model.params.validate();
    plan.termination = Termination::fixed(t->length);
    plan.starts = every_vertex(degrees, t->walks_per_vertex);
  } else if (const auto* t = std::get_if<DeepWalkTask>(&task)) {
    plan.model = WalkModel::deepwalk();
    plan.termination = Termination::fixed(t->length);
    plan.starts = every_vertex(degrees, t->walks_per_vertex);
  } else {
    const auto& pr = std::get<PrnvTask>(task);
    plan.model = WalkModel::node2vec(pr.p, pr.q);
    plan.model.params.validate();
    plan.termination = Termination::geometric(pr.decay, pr.max_length);
    if (pr.query_nodes.empty()) throw std::invalid_argument("PRNV needs at least one query node");
    const std::uint64_t samples = pr.samples_per_query.value_or(4 * degrees.size());
    if (samples == 0) throw std::invalid_argument("samples per query must be positive");
    std::set<vertex_t> seen;
    for (auto q : pr.query_nodes) {
      if (q >= degrees.size()) {
        throw std::out_of_range(fmt::format("query node {} >= vertex_count {}", q, degrees.size()));
      }
      if (seen.insert(q).second) plan.starts.push_back({q, samples});
    }
  }
  return plan;
}

std::vector<std::pair<vertex_t, std::uint64_t>> PprEstimate::top(std::size_t k) const {
  std::vector<std::pair<vertex_t, std::uint64_t>> all(visit_counts.begin(), visit_counts.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<PprEstimate> ppr_estimates(const EndpointCounter& counter, std::span<const vertex_t> queries) {
  std::vector<PprEstimate> out;
  std::set<vertex_t> seen;
  for (auto q : queries) {
    if (!seen.insert(q).second) continue;
    PprEstimate e;
    e.query = q;
    if (auto it = counter.counts().find(q); it != counter.counts().end()) {
      for (auto [v, c] : it->second) {
        e.visit_counts[v] = c;
        e.total_samples += c;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

nlohmann::json ppr_to_json(std::span<const PprEstimate> estimates, std::size_t top_k) {
  auto arr = nlohmann::json::array();
  for (const auto& e : estimates) {
    auto top = nlohmann::json::array();
    for (auto [v, c] : e.top(top_k)) top.push_back(nlohmann::json::array({v, c}));
    arr.push_back({{"query", e.query}, {"total_samples", e.total_samples}, {"top", std::move(top)}});
  }
  return arr;
}

}  // namespace grasorw
