#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>

#include "grasorw/partition.hpp"
#include "grasorw/rng.hpp"
#include "grasorw/synthetic.hpp"
#include "grasorw/transition.hpp"

namespace grasorw {
namespace {

int bfs_distance(const CsrGraph& g, vertex_t from, vertex_t to) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::queue<vertex_t> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    for (auto y : g.adjacency(x).neighbors) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  return dist[to];
}

TEST(HopDistance, MatchesBreadthFirstSearch) {
  auto list = synthetic::erdos_renyi(120, 5, 4);
  auto g = build_csr(list.edges, list.vertex_count);
  for (vertex_t v = 0; v < g.vertex_count(); ++v) {
    for (auto u : g.adjacency(v).neighbors) {
      for (auto z : g.adjacency(v).neighbors) {
        const int d = hop_distance(u, z, g.adjacency(u));
        EXPECT_EQ(d, bfs_distance(g, u, z)) << u << " " << v << " " << z;
      }
    }
  }
}

TEST(Node2vec, WeightsFollowHopClasses) {
  // u=0 with neighbors {1,2}; v=1 with neighbors {0,2,3}.
  auto g = build_csr({{0, 1}, {0, 2}, {1, 2}, {1, 3}}, 4);
  auto w = node2vec_weights(0, g.adjacency(1), g.adjacency(0), {4.0, 0.25});
  EXPECT_EQ(w, (std::vector<double>{0.25, 1.0, 4.0}));
}

// Sweeps r across [0,1) on a fine grid; the share of grid points that select
// each neighbor must equal its normalized weight up to the grid spacing.
TEST(Node2vec, InverseCdfReproducesExactDistribution) {
  auto list = synthetic::erdos_renyi(60, 8, 21);
  auto g = build_csr(list.edges, list.vertex_count);
  const int grid = 200000;
  for (auto [p, q] : {std::pair{4.0, 0.25}, std::pair{0.25, 4.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    for (vertex_t v = 0; v < 10; ++v) {
      auto vadj = g.adjacency(v);
      if (vadj.degree() == 0) continue;
      const vertex_t u = vadj.neighbors[0];
      auto uadj = g.adjacency(u);
      std::map<vertex_t, double> expect;
      double total = 0;
      for (auto z : vadj.neighbors) {
        const int d = bfs_distance(g, u, z);
        const double w = d == 0 ? 1 / p : d == 1 ? 1.0 : 1 / q;
        expect[z] = w;
        total += w;
      }
      std::map<vertex_t, int> hits;
      for (int k = 0; k < grid; ++k) ++hits[node2vec_next(u, vadj, uadj, {p, q}, (k + 0.5) / grid)];
      for (auto [z, w] : expect) {
        EXPECT_NEAR(static_cast<double>(hits[z]) / grid, w / total, 2.0 / grid) << "p=" << p << " z=" << z;
      }
    }
  }
}

TEST(Node2vec, UnitParametersEqualDeepWalk) {
  auto list = synthetic::erdos_renyi(80, 6, 2);
  auto g = build_csr(list.edges, list.vertex_count);
  std::mt19937_64 gen(1);
  for (int k = 0; k < 20000; ++k) {
    const vertex_t v = gen() % g.vertex_count();
    auto vadj = g.adjacency(v);
    if (vadj.degree() == 0) continue;
    const vertex_t u = vadj.neighbors[gen() % vadj.degree()];
    const RngKey key{7, v, static_cast<std::uint64_t>(k), 3};
    EXPECT_EQ(node2vec_next(u, v, vadj, g.adjacency(u), {1.0, 1.0}, key), deepwalk_next(v, vadj, key));
  }
}

TEST(Node2vec, ReturnRateOnStarIsBinomial) {
  // From the center of a 10-leaf star after arriving from leaf 1, the walk
  // returns with probability (1/p) / (1/p + 9/q).
  auto list = synthetic::star(10);
  auto g = build_csr(list.edges, list.vertex_count);
  for (auto [p, q] : {std::pair{4.0, 0.25}, std::pair{0.25, 4.0}}) {
    const double expect = (1 / p) / (1 / p + 9 / q);
    const int n = 200000;
    int back = 0;
    for (int k = 0; k < n; ++k) {
      const RngKey key{11, 1, static_cast<std::uint64_t>(k), 1};
      back += node2vec_next(1, 0, g.adjacency(0), g.adjacency(1), {p, q}, key) == 1;
    }
    const double sigma = std::sqrt(expect * (1 - expect) / n);
    EXPECT_NEAR(static_cast<double>(back) / n, expect, 5 * sigma) << "p=" << p;
  }
}

TEST(DeepWalk, UniformOverNeighbors) {
  auto g = build_csr({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}}, 6);
  std::vector<int> hits(6);
  const int n = 120000;
  for (int k = 0; k < n; ++k) ++hits[deepwalk_next(0, g.adjacency(0), RngKey{3, 0, static_cast<std::uint64_t>(k), 0})];
  EXPECT_EQ(hits[0], 0);
  const double sigma = std::sqrt(0.2 * 0.8 / n);
  for (int z = 1; z <= 5; ++z) EXPECT_NEAR(hits[z] / double(n), 0.2, 5 * sigma);
  EXPECT_EQ(deepwalk_next(g.adjacency(0), 0.0), 1u);
  EXPECT_EQ(deepwalk_next(g.adjacency(0), std::nextafter(1.0, 0.0)), 5u);
}

TEST(Transition, DeadEndsAreRejected) {
  AdjacencySlice empty{0, {}};
  EXPECT_THROW(deepwalk_next(empty, 0.5), std::invalid_argument);
  EXPECT_THROW(node2vec_next(1, empty, empty, {1, 1}, 0.5), std::invalid_argument);
}

TEST(Termination, FixedLengthEighty) {
  auto t = Termination::fixed(80);
  EXPECT_TRUE(should_terminate(t, 79, RngKey{}));
  EXPECT_FALSE(should_terminate(t, 0, RngKey{}));
}

TEST(Transition, SingleNeighborIsForced) {
  auto g = build_csr({{0, 1}, {1, 2}}, 3);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const RngKey key{k, 0, k, 1};
    EXPECT_EQ(deepwalk_next(0, g.adjacency(0), key), 1u);
    EXPECT_EQ(node2vec_next(1, 0, g.adjacency(0), g.adjacency(1), {4, 0.25}, key), 1u);
  }
  const RngKey key{3, 1, 2, 3};
  EXPECT_EQ(deepwalk_next(1, g.adjacency(1), key), deepwalk_next(1, g.adjacency(1), key));
}

TEST(Termination, FixedLengthStopsAtLastHop) {
  auto t = Termination::fixed(5);
  for (hop_t h = 0; h < 4; ++h) EXPECT_FALSE(should_terminate(t, h, 0.99));
  EXPECT_TRUE(should_terminate(t, 4, 0.0));
  EXPECT_EQ(t.hop_cap(), 4u);
  EXPECT_TRUE(should_terminate(Termination::fixed(1), 0, 0.5));
}

TEST(Termination, GeometricTakesFirstStepAndRespectsCap) {
  auto t = Termination::geometric(0.85, 20);
  EXPECT_FALSE(should_terminate(t, 0, 0.999));
  EXPECT_TRUE(should_terminate(t, 3, 0.85));
  EXPECT_FALSE(should_terminate(t, 3, 0.8499));
  EXPECT_TRUE(should_terminate(t, 19, 0.0));
  EXPECT_EQ(t.hop_cap(), 19u);
  EXPECT_TRUE(should_terminate(Termination::geometric(0.0, 20), 1, 0.0));
}

TEST(Termination, GeometricMeanLengthMatchesClosedForm) {
  // The final hop H satisfies P(H >= h) = 0.85^(h-1) for 1 <= h <= 19.
  double expect_hop = 0;
  for (int h = 1; h <= 19; ++h) expect_hop += std::pow(0.85, h - 1);
  auto t = Termination::geometric(0.85, 20);
  const int n = 1000000;
  double sum = 0, sumsq = 0;
  for (int w = 0; w < n; ++w) {
    hop_t hop = 0;
    RngKey key{5, 17, static_cast<std::uint64_t>(w), 0};
    while (!should_terminate(t, hop, key)) ++hop;
    sum += hop;
    sumsq += double(hop) * hop;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  EXPECT_NEAR(mean, expect_hop, 5 * sd / std::sqrt(double(n)));
  EXPECT_NEAR(mean + 1, expect_hop + 1, 0.01 * (expect_hop + 1));
}

TEST(Termination, Validation) {
  EXPECT_THROW(Termination::fixed(0), std::invalid_argument);
  EXPECT_THROW(Termination::fixed(1025), std::invalid_argument);
  EXPECT_NO_THROW(Termination::fixed(1024));
  EXPECT_THROW(Termination::geometric(1.0, 20), std::invalid_argument);
  EXPECT_THROW(Termination::geometric(-0.1, 20), std::invalid_argument);
  EXPECT_THROW(Termination::geometric(0.5, 0), std::invalid_argument);
  EXPECT_THROW((Node2vecParams{0.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Node2vecParams{1.0, -2.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Node2vecParams{1.0, NAN}.validate()), std::invalid_argument);
}

TEST(Rng, KeyedDrawsAreStableAndSeparated) {
  RngKey a{1, 2, 3, 4};
  EXPECT_EQ(draw_bits(a, Stream::Step), draw_bits(a, Stream::Step));
  EXPECT_NE(draw_bits(a, Stream::Step), draw_bits(a, Stream::Terminate));
  RngKey b = a;
  b.hop = 5;
  EXPECT_NE(draw_bits(a, Stream::Step), draw_bits(b, Stream::Step));
  b = a;
  b.walk_index = 4;
  EXPECT_NE(draw_bits(a, Stream::Step), draw_bits(b, Stream::Step));
  for (std::uint64_t bits : {0ull, ~0ull, 1ull << 63}) {
    const double r = to_unit(bits);
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(Rng, UnitDrawsAreUniform) {
  const int bins = 20, n = 200000;
  std::vector<int> hist(bins);
  for (int k = 0; k < n; ++k) ++hist[static_cast<int>(draw_unit({9, 0, static_cast<std::uint64_t>(k), 0}, Stream::Step) * bins)];
  double chi2 = 0;
  const double e = double(n) / bins;
  for (int h : hist) chi2 += (h - e) * (h - e) / e;
  EXPECT_LT(chi2, 43.8);  // 0.999 quantile at 19 degrees of freedom
}

}  // namespace
}  // namespace grasorw
