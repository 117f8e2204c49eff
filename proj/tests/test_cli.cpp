#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "grasorw/commands.hpp"
#include "grasorw/io.hpp"
#include "grasorw/oracle.hpp"
#include "grasorw/synthetic.hpp"
#include "support.hpp"

namespace grasorw {
namespace {

using testing::TempDir;

TEST(Synthetic, ErdosRenyiEdgeCountNearExpectation) {
  auto g = synthetic::erdos_renyi(1000, 40, 7);
  const double expect = 1000 * 40 / 2.0;
  EXPECT_NEAR(static_cast<double>(g.edges.size()), expect, 0.05 * expect);
  std::set<std::pair<vertex_t, vertex_t>> uniq;
  for (auto e : g.edges) {
    EXPECT_NE(e.src, e.dst);
    EXPECT_TRUE(uniq.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)}).second);
  }
}

TEST(Synthetic, SameSeedSameGraph) {
  auto a = synthetic::erdos_renyi(500, 6, 3), b = synthetic::erdos_renyi(500, 6, 3);
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    EXPECT_EQ(a.edges[k].src, b.edges[k].src);
    EXPECT_EQ(a.edges[k].dst, b.edges[k].dst);
  }
}

TEST(Synthetic, StarAndTwoCommunity) {
  auto s = synthetic::star(5);
  EXPECT_EQ(s.edges.size(), 5u);
  EXPECT_EQ(s.vertex_count, 6u);
  for (auto e : s.edges) EXPECT_TRUE(e.src == 0 || e.dst == 0);
  auto t = synthetic::two_community(400, 0.1, 0.0, 2);
  for (auto e : t.edges) EXPECT_EQ(e.src < 200, e.dst < 200);
}

TEST(ParseSize, Suffixes) {
  EXPECT_EQ(cli::parse_size("16MiB"), 16ull << 20);
  EXPECT_EQ(cli::parse_size("44"), 44u);
  EXPECT_EQ(cli::parse_size("2k"), 2048u);
  EXPECT_EQ(cli::parse_size("1G"), 1ull << 30);
  EXPECT_THROW(cli::parse_size("12 parsecs"), std::invalid_argument);
  EXPECT_THROW(cli::parse_size("MiB"), std::invalid_argument);
}

TEST(Tasks, PlansSkipIsolatedVertices) {
  const std::vector<std::uint64_t> degrees{2, 0, 1, 3};
  auto rw = plan_task(RwnvTask{}, degrees);
  ASSERT_EQ(rw.starts.size(), 3u);
  EXPECT_EQ(rw.starts[1].source, 2u);
  EXPECT_EQ(rw.starts[1].walk_count, 10u);
  EXPECT_EQ(rw.termination.length, 80u);
  EXPECT_TRUE(rw.model.second_order());
  auto dw = plan_task(DeepWalkTask{3, 5}, degrees);
  EXPECT_FALSE(dw.model.second_order());
  PrnvTask pr;
  pr.query_nodes = {3, 0, 3};
  auto pp = plan_task(pr, degrees);
  ASSERT_EQ(pp.starts.size(), 2u);
  EXPECT_EQ(pp.starts[0].walk_count, 16u);
  EXPECT_EQ(pp.termination.kind, Termination::Kind::GeometricCapped);
  pr.query_nodes = {4};
  EXPECT_THROW(plan_task(pr, degrees), std::out_of_range);
}

class CliStore : public ::testing::Test {
 protected:
  void SetUp() override {
    cli::GenArgs gen;
    gen.kind = "er";
    gen.n = 100;
    gen.avg_degree = 6;
    gen.seed = 4;
    gen.out = tmp_ / "edges.txt";
    graph_ = cli::cmd_gen(gen);
    cli::PartitionArgs part;
    part.input = gen.out;
    part.out = tmp_ / "store";
    part.block_size = 700;
    store_blocks_ = cli::cmd_partition(part).block_count();
  }
  cli::RunArgs args() const {
    cli::RunArgs a;
    a.store = tmp_ / "store";
    a.metrics_out = tmp_ / "metrics.json";
    a.ppr_out = tmp_ / "ppr.json";
    a.deterministic = true;
    return a;
  }
  TempDir tmp_;
  EdgeList graph_;
  block_t store_blocks_ = 0;
};

TEST_F(CliStore, RwnvWritesOneTrajectoryPerWalk) {
  ASSERT_GE(store_blocks_, 3u);
  auto a = args();
  a.traj_out = (tmp_ / "traj.bin").string();
  auto r = cli::cmd_run(a);
  auto store = GraphStore::open(a.store);
  std::size_t non_isolated = 0;
  for (auto d : store.degrees()) non_isolated += d > 0;
  const auto trajs = read_trajectories(tmp_ / "traj.bin", 4);
  EXPECT_EQ(trajs.size(), 10 * non_isolated);
  for (const auto& t : trajs) EXPECT_EQ(t.vertices.size(), 80u);
  auto oracle = cli::cmd_oracle(a);
  EXPECT_TRUE(read_trajectories(tmp_ / "traj.bin", 4) == oracle.trajectories);
  std::ifstream metrics(a.metrics_out);
  auto j = nlohmann::json::parse(metrics);
  EXPECT_EQ(j.at("walks_finished").get<std::uint64_t>(), trajs.size());
}

TEST_F(CliStore, PrnvConservesSamples) {
  {
    std::ofstream q(tmp_ / "queries.txt");
    q << "# queries\n0\n5\n5\n";
  }
  auto a = args();
  a.task = "prnv";
  a.query_nodes = tmp_ / "queries.txt";
  a.p = 4;
  a.q = 0.25;
  auto r = cli::cmd_run(a);
  ASSERT_EQ(r.ppr.size(), 2u);
  for (const auto& e : r.ppr) {
    EXPECT_EQ(e.total_samples, 400u);
    std::uint64_t sum = 0;
    for (auto [v, c] : e.visit_counts) sum += c;
    EXPECT_EQ(sum, e.total_samples);
  }
  std::ifstream in(a.ppr_out);
  auto j = nlohmann::json::parse(in);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0].at("query").get<vertex_t>(), 0u);
  EXPECT_EQ(j[0].at("total_samples").get<std::uint64_t>(), 400u);
}

TEST_F(CliStore, ZeroDecayStopsAfterFirstStep) {
  {
    std::ofstream q(tmp_ / "queries.txt");
    q << "7\n";
  }
  auto a = args();
  a.task = "prnv";
  a.query_nodes = tmp_ / "queries.txt";
  a.decay = 0;
  auto r = cli::cmd_run(a);
  auto store = GraphStore::open(a.store);
  const auto adj = store.fetch_vertex(7);
  for (auto [v, c] : r.ppr.at(0).visit_counts) {
    EXPECT_TRUE(std::binary_search(adj.neighbors.begin(), adj.neighbors.end(), v));
  }
}

TEST_F(CliStore, LearnedModeNeedsATrainedModel) {
  auto a = args();
  a.loading = "learned";
  EXPECT_THROW(cli::cmd_run(a), Error);
}

TEST_F(CliStore, TrainLoaderWritesModelAndLog) {
  auto a = args();
  a.walks_per_vertex = 4;
  a.length = 20;
  auto hook = [](const LoadSample& s) { return s.mode == LoadMode::Full ? 1.0 * s.eta + 2.0 : 3.0 * s.eta; };
  auto first = cli::cmd_train_loader(a, {}, hook);
  EXPECT_TRUE(std::filesystem::exists(tmp_ / "store" / "loader_model.json"));
  EXPECT_TRUE(std::filesystem::exists(tmp_ / "store" / "loader_samples.csv"));
  ASSERT_TRUE(first.model.global());
  EXPECT_NEAR(*first.model.global()->eta0, 1.0, 1e-9);
  auto second = cli::cmd_train_loader(a, {}, hook);
  EXPECT_EQ(first.model.to_json(), second.model.to_json());
  a.loading = "learned";
  EXPECT_NO_THROW(cli::cmd_run(a));
}

TEST_F(CliStore, TinyTaskFallsBackToFull) {
  {
    std::ofstream q(tmp_ / "queries.txt");
    q << "1\n";
  }
  auto a = args();
  a.task = "prnv";
  a.query_nodes = tmp_ / "queries.txt";
  a.samples_per_query = 1;
  a.decay = 0;
  auto r = cli::cmd_train_loader(a, tmp_ / "m.json");
  EXPECT_TRUE(r.model.fallback_only());
  EXPECT_TRUE(LoaderModel::load(tmp_ / "m.json").to_json().at("fallback_full").get<bool>());
}

TEST_F(CliStore, BenchEmitsOneRowPerStrategyAndEngine) {
  auto a = args();
  a.task = "deepwalk";
  a.walks_per_vertex = 2;
  a.length = 30;
  std::ostringstream csv;
  auto rows = cli::cmd_bench_schedulers(a, csv);
  ASSERT_EQ(rows.size(), 10u);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "strategy,engine,block_io_count,block_io_bytes,wall_time_seconds,block_loads,time_slots");
  for (const auto& r : rows) {
    if (r.scheduler != "iteration") continue;
    for (const auto& o : rows) {
      if (o.engine == r.engine && o.scheduler == "alphabet") {
        EXPECT_LE(r.block_loads, o.block_loads);
      }
    }
  }
}

TEST(Cli, SingleBlockStoreMakesStrategiesIdentical) {
  TempDir tmp;
  testing::make_store(synthetic::erdos_renyi(60, 4, 1), tmp / "s", 1 << 20);
  cli::RunArgs a;
  a.store = tmp / "s";
  a.length = 20;
  a.deterministic = true;
  std::ostringstream csv;
  auto rows = cli::cmd_bench_schedulers(a, csv);
  for (const auto& r : rows) {
    EXPECT_EQ(r.block_io_count, rows[0].block_io_count);
    EXPECT_EQ(r.block_io_bytes, rows[0].block_io_bytes);
    EXPECT_EQ(r.time_slots, 0u);
  }
}

TEST(Cli, PartitionTwoEdgeFile) {
  TempDir tmp;
  {
    std::ofstream e(tmp / "e.txt");
    e << "0 1\n1 2\n";
  }
  cli::PartitionArgs p;
  p.input = tmp / "e.txt";
  p.out = tmp / "s";
  p.block_size = cli::parse_size("16MiB");
  EXPECT_EQ(cli::cmd_partition(p).block_count(), 1u);
  {
    std::ofstream b(tmp / "b.txt");
    b << "0 1\n1 0\n2 1\n";
  }
  p.block_file = tmp / "b.txt";
  p.out = tmp / "c";
  EXPECT_EQ(cli::cmd_partition(p).block_count(), 2u);
  EXPECT_TRUE(std::filesystem::exists(tmp / "c" / "vertex_remap.bin"));
}

}  // namespace
}  // namespace grasorw
