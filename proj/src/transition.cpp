#include "grasorw/transition.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "grasorw/kernels.hpp"

namespace grasorw {

void Node2vecParams::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument(fmt::format("node2vec p must be positive, got {}", p));
  if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument(fmt::format("node2vec q must be positive, got {}", q));
}

Termination Termination::fixed(std::uint32_t length) {
  Termination t;
  t.kind = Kind::FixedLength;
  t.length = length;
  t.validate();
  return t;
}

Termination Termination::geometric(double continue_prob, std::uint32_t max_length) {
  Termination t;
  t.kind = Kind::GeometricCapped;
  t.continue_prob = continue_prob;
  t.max_length = max_length;
  t.validate();
  return t;
}

void Termination::validate() const {
  const std::uint32_t cap = kind == Kind::FixedLength ? length : max_length;
  if (cap < 1 || cap > kMaxHops) throw std::invalid_argument(fmt::format("walk length {} outside [1, 1024]", cap));
  if (kind == Kind::GeometricCapped && !(continue_prob >= 0.0 && continue_prob < 1.0)) {
    throw std::invalid_argument(fmt::format("continue probability {} outside [0, 1)", continue_prob));
  }
}

int hop_distance(vertex_t u, vertex_t z, const AdjacencySlice& u_adj) {
  if (z == u) return 0;
  return std::binary_search(u_adj.neighbors.begin(), u_adj.neighbors.end(), z) ? 1 : 2;
}

std::vector<double> node2vec_weights(vertex_t u, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                                     const Node2vecParams& params) {
  const double w[3] = {1.0 / params.p, 1.0, 1.0 / params.q};
  std::vector<std::uint8_t> cls(v_adj.degree());
  simd::classify_hops(u, v_adj.neighbors, u_adj.neighbors, cls.data());
  std::vector<double> out(cls.size());
  for (std::size_t k = 0; k < cls.size(); ++k) out[k] = w[cls[k]];
  return out;
}

vertex_t node2vec_next(vertex_t u, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                       const Node2vecParams& params, double r) {
  const std::size_t d = v_adj.degree();
  if (d == 0) throw std::invalid_argument("node2vec_next on a vertex without neighbors");
  thread_local std::vector<std::uint8_t> cls;
  if (cls.size() < d) cls.resize(std::max<std::size_t>(d, 2 * cls.size()));
  simd::classify_hops(u, v_adj.neighbors, u_adj.neighbors, cls.data());

  const double w[3] = {1.0 / params.p, 1.0, 1.0 / params.q};
  std::size_t count[3] = {0, 0, 0};
  for (std::size_t k = 0; k < d; ++k) ++count[cls[k]];
  const double total = static_cast<double>(count[0]) * w[0] + static_cast<double>(count[1]) * w[1] +
                       static_cast<double>(count[2]) * w[2];
  const double target = r * total;
  double cum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    cum += w[cls[k]];
    if (cum > target) return v_adj.neighbors[k];
  }
  return v_adj.neighbors[d - 1];
}

vertex_t node2vec_next(vertex_t u, vertex_t /*v*/, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                       const Node2vecParams& params, const RngKey& key) {
  return node2vec_next(u, v_adj, u_adj, params, draw_unit(key, Stream::Step));
}

vertex_t deepwalk_next(const AdjacencySlice& v_adj, double r) {
  const std::size_t d = v_adj.degree();
  if (d == 0) throw std::invalid_argument("deepwalk_next on a vertex without neighbors");
  const auto idx = static_cast<std::size_t>(r * static_cast<double>(d));
  return v_adj.neighbors[std::min(idx, d - 1)];
}

vertex_t deepwalk_next(vertex_t /*v*/, const AdjacencySlice& v_adj, const RngKey& key) {
  return deepwalk_next(v_adj, draw_unit(key, Stream::Step));
}

bool should_terminate(const Termination& t, hop_t hop, double r) {
  if (t.kind == Termination::Kind::FixedLength) return hop + 1 >= t.length;
  if (hop + 1 >= t.max_length) return true;
  // The first step is always taken; the stop draw starts after it.
  return hop > 0 && r >= t.continue_prob;
}

bool should_terminate(const Termination& t, hop_t hop, const RngKey& key) {
  RngKey k = key;
  k.hop = hop;
  return should_terminate(t, hop, draw_unit(k, Stream::Terminate));
}

std::string to_string(const WalkModel& m) {
  if (m.kind == ModelKind::DeepWalk) return "deepwalk";
  return fmt::format("node2vec(p={}, q={})", m.params.p, m.params.q);
}

std::string to_string(const Termination& t) {
  if (t.kind == Termination::Kind::FixedLength) return fmt::format("fixed({})", t.length);
  return fmt::format("geometric({}, {})", t.continue_prob, t.max_length);
}

}  // namespace grasorw
