#include "grasorw/oracle.hpp"

namespace grasorw {

CsrGraph load_graph(const GraphStore& store) {
  CsrGraph g;
  const vertex_t n = store.vertex_count();
  g.offsets.assign(n + 1, 0);
  g.neighbors.reserve(store.meta().edge_count);
  for (block_t b = 0; b < store.block_count(); ++b) {
    auto data = store.load_block_full(b);
    for (vertex_t v = store.block_start(b); v < store.block_start(b) + store.block_span(b); ++v) {
      auto adj = *data->peek(v);
      g.neighbors.insert(g.neighbors.end(), adj.neighbors.begin(), adj.neighbors.end());
      g.offsets[v + 1] = g.neighbors.size();
    }
  }
  return g;
}

void oracle_run(const CsrGraph& graph, std::span<const WalkStart> starts, const WalkModel& model,
                const Termination& termination, std::uint64_t seed, WalkSink& sink) {
  termination.validate();
  WalkStartTable table(starts);
  sink.begin(table.total(), 1);
  std::vector<vertex_t> path;
  std::uint64_t walk_id = 0;
  for (const auto& start : starts) {
    for (std::uint64_t j = 0; j < start.walk_count; ++j, ++walk_id) {
      const RngKey base{seed, start.source, j, 0};
      path.assign(1, start.source);
      vertex_t pre = kNoVertex;
      vertex_t cur = start.source;
      hop_t hop = 0;
      bool stop = should_terminate(termination, 0, base);
      while (!stop) {
        const AdjacencySlice v_adj = graph.adjacency(cur);
        if (v_adj.degree() == 0) break;
        RngKey key = base;
        key.hop = hop;
        const vertex_t next = model.second_order() && hop > 0
                                  ? node2vec_next(pre, cur, v_adj, graph.adjacency(pre), model.params, key)
                                  : deepwalk_next(cur, v_adj, key);
        pre = cur;
        cur = next;
        ++hop;
        path.push_back(cur);
        stop = should_terminate(termination, hop, base);
      }
      if (sink.wants_fragments()) sink.fragment(0, walk_id, 0, path);
      sink.finish(0, walk_id, start.source, cur);
    }
  }
  sink.end();
}

std::vector<Trajectory> oracle_trajectories(const CsrGraph& graph, std::span<const WalkStart> starts,
                                            const WalkModel& model, const Termination& termination,
                                            std::uint64_t seed) {
  TrajectoryCollector collector;
  oracle_run(graph, starts, model, termination, seed, collector);
  return collector.take();
}

}  // namespace grasorw
