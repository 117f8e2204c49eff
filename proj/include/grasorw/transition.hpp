#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grasorw/graph_store.hpp"
#include "grasorw/rng.hpp"

namespace grasorw {

struct Node2vecParams {
  double p = 1.0;
  double q = 1.0;

  void validate() const;
};

enum class ModelKind : std::uint8_t { DeepWalk, Node2vec };

struct WalkModel {
  ModelKind kind = ModelKind::DeepWalk;
  Node2vecParams params;

  static WalkModel deepwalk() { return {}; }
  static WalkModel node2vec(double p, double q) { return {ModelKind::Node2vec, {p, q}}; }
  bool second_order() const { return kind == ModelKind::Node2vec; }
};

/// Stopping rule evaluated after every step. `hop` is the number of steps
/// taken so far, so a walk of length L visits L vertices and ends at hop L-1.
struct Termination {
  enum class Kind : std::uint8_t { FixedLength, GeometricCapped };

  Kind kind = Kind::FixedLength;
  std::uint32_t length = 80;  // FixedLength
  double continue_prob = 0.85;  // GeometricCapped
  std::uint32_t max_length = 20;  // GeometricCapped

  static Termination fixed(std::uint32_t length);
  static Termination geometric(double continue_prob, std::uint32_t max_length);

  void validate() const;
  /// Largest hop any walk can reach.
  hop_t hop_cap() const { return (kind == Kind::FixedLength ? length : max_length) - 1; }
};

/// 0 if z == u, 1 if z is adjacent to u, 2 otherwise.
int hop_distance(vertex_t u, vertex_t z, const AdjacencySlice& u_adj);

/// Unnormalized weights aligned with v_adj.neighbors.
std::vector<double> node2vec_weights(vertex_t u, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                                     const Node2vecParams& params);

/// Inverse-CDF draw from the weights above using `r` in [0, 1).
vertex_t node2vec_next(vertex_t u, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                       const Node2vecParams& params, double r);
vertex_t node2vec_next(vertex_t u, vertex_t v, const AdjacencySlice& v_adj, const AdjacencySlice& u_adj,
                       const Node2vecParams& params, const RngKey& key);

vertex_t deepwalk_next(const AdjacencySlice& v_adj, double r);
vertex_t deepwalk_next(vertex_t v, const AdjacencySlice& v_adj, const RngKey& key);

bool should_terminate(const Termination& t, hop_t hop, double r);
bool should_terminate(const Termination& t, hop_t hop, const RngKey& key);

std::string to_string(const WalkModel& m);
std::string to_string(const Termination& t);

}  // namespace grasorw
