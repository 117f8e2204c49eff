#pragma once

#include <span>
#include <vector>

#include "grasorw/graph_store.hpp"
#include "grasorw/partition.hpp"
#include "grasorw/trajectory.hpp"
#include "grasorw/transition.hpp"

namespace grasorw {

/// Reads the whole store into memory.
CsrGraph load_graph(const GraphStore& store);

/// Runs every walk to completion on the in-memory graph using the
/// deterministic key discipline of the engine. Walk ids follow start-list
/// order, so results line up with an engine run on the same starts.
void oracle_run(const CsrGraph& graph, std::span<const WalkStart> starts, const WalkModel& model,
                const Termination& termination, std::uint64_t seed, WalkSink& sink);

std::vector<Trajectory> oracle_trajectories(const CsrGraph& graph, std::span<const WalkStart> starts,
                                            const WalkModel& model, const Termination& termination,
                                            std::uint64_t seed);

}  // namespace grasorw
