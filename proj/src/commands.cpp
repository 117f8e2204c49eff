#include "grasorw/commands.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "grasorw/oracle.hpp"
#include "grasorw/synthetic.hpp"

namespace grasorw::cli {

namespace fs = std::filesystem;

std::uint64_t parse_size(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr == text.data()) throw std::invalid_argument(fmt::format("bad size '{}'", text));
  std::string suffix(ptr, text.data() + text.size());
  std::transform(suffix.begin(), suffix.end(), suffix.begin(), [](unsigned char c) { return std::tolower(c); });
  unsigned shift = 0;
  if (suffix.empty() || suffix == "b") {
    shift = 0;
  } else if (suffix == "k" || suffix == "kb" || suffix == "kib") {
    shift = 10;
  } else if (suffix == "m" || suffix == "mb" || suffix == "mib") {
    shift = 20;
  } else if (suffix == "g" || suffix == "gb" || suffix == "gib") {
    shift = 30;
  } else {
    throw std::invalid_argument(fmt::format("bad size suffix in '{}'", text));
  }
  if (shift > 0 && value > (~std::uint64_t{0} >> shift)) throw std::invalid_argument(fmt::format("size '{}' overflows", text));
  return value << shift;
}

GraphStore cmd_partition(const PartitionArgs& args) {
  if (!args.block_file.empty()) return import_partition(args.input, args.block_file, args.out, args.id_width);
  return partition_sequential(args.input, args.out, PartitionOptions{args.block_size, args.id_width});
}

std::vector<vertex_t> read_query_nodes(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open query node file '" + path.string() + "'");
  std::vector<vertex_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    vertex_t v = 0;
    auto last = line.find_last_not_of(" \t\r");
    auto [ptr, ec] = std::from_chars(line.data() + first, line.data() + last + 1, v);
    if (ec != std::errc{} || ptr != line.data() + last + 1) {
      throw Error(fmt::format("{}:{}: cannot parse '{}'", path.string(), lineno, line));
    }
    out.push_back(v);
  }
  return out;
}

TaskSpec make_task(const RunArgs& args) {
  if (args.task == "rwnv") return RwnvTask{args.walks_per_vertex, args.length, args.p, args.q};
  if (args.task == "deepwalk") return DeepWalkTask{args.walks_per_vertex, args.length};
  if (args.task == "prnv") {
    if (args.query_nodes.empty()) throw std::invalid_argument("prnv requires --query-nodes");
    PrnvTask t;
    t.query_nodes = read_query_nodes(args.query_nodes);
    t.decay = args.decay;
    t.max_length = args.max_length;
    t.samples_per_query = args.samples_per_query;
    t.p = args.p;
    t.q = args.q;
    return t;
  }
  throw std::invalid_argument("unknown task '" + args.task + "'");
}

namespace {

EngineConfig make_config(const RunArgs& args, const TaskPlan& plan) {
  EngineConfig cfg;
  cfg.model = plan.model;
  cfg.termination = plan.termination;
  if (args.scheduler) cfg.scheduler = parse_scheduler(*args.scheduler);
  cfg.mode = parse_engine_mode(args.engine);
  cfg.loading = parse_loading_policy(args.loading);
  cfg.threads = args.threads;
  cfg.seed = args.seed;
  cfg.deterministic = args.deterministic;
  cfg.work_dir = args.work_dir;
  cfg.flush_threshold = args.flush_threshold;
  return cfg;
}

bool wants_trajectories(const RunArgs& args) {
  return args.task != "prnv" && !args.traj_out.empty() && args.traj_out != "null";
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot create '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed on '" + path.string() + "'");
}

void write_outputs(const RunArgs& args, RunResult& result, unsigned id_width, bool with_metrics) {
  if (with_metrics) write_json(args.metrics_out, result.metrics.to_json());
  if (wants_trajectories(args)) write_trajectories(args.traj_out, result.trajectories, id_width);
  if (args.task == "prnv") write_json(args.ppr_out, ppr_to_json(result.ppr, args.top_k));
}

fs::path default_model_path(const RunArgs& args) {
  return args.loader_model.empty() ? args.store / "loader_model.json" : args.loader_model;
}

}  // namespace

RunResult cmd_run(const RunArgs& args) {
  const GraphStore store = GraphStore::open(args.store);
  const auto degrees = store.degrees();
  const TaskPlan plan = plan_task(make_task(args), degrees);
  EngineConfig cfg = make_config(args, plan);

  LoaderModel model;
  if (cfg.loading == LoadingPolicy::Learned) {
    const fs::path path = default_model_path(args);
    if (!fs::exists(path)) throw Error("loader model '" + path.string() + "' not found; run train-loader first");
    model = LoaderModel::load(path);
    cfg.loader = &model;
  }

  TrajectoryCollector collector;
  EndpointCounter endpoints;
  NullSink null;
  if (args.task == "prnv") {
    cfg.sink = &endpoints;
  } else if (wants_trajectories(args)) {
    cfg.sink = &collector;
  } else {
    cfg.sink = &null;
  }

  RunResult result;
  result.metrics = run(store, plan.starts, cfg);
  if (args.task == "prnv") {
    std::vector<vertex_t> queries;
    for (const auto& s : plan.starts) queries.push_back(s.source);
    result.ppr = ppr_estimates(endpoints, queries);
  } else if (wants_trajectories(args)) {
    result.trajectories = collector.take();
  }
  write_outputs(args, result, store.meta().id_width, true);
  return result;
}

RunResult cmd_oracle(const RunArgs& args) {
  const GraphStore store = GraphStore::open(args.store);
  const CsrGraph graph = load_graph(store);
  std::vector<std::uint64_t> degrees(graph.vertex_count());
  for (vertex_t v = 0; v < graph.vertex_count(); ++v) degrees[v] = graph.degree(v);
  const TaskPlan plan = plan_task(make_task(args), degrees);

  RunResult result;
  if (args.task == "prnv") {
    EndpointCounter endpoints;
    oracle_run(graph, plan.starts, plan.model, plan.termination, args.seed, endpoints);
    std::vector<vertex_t> queries;
    for (const auto& s : plan.starts) queries.push_back(s.source);
    result.ppr = ppr_estimates(endpoints, queries);
  } else if (wants_trajectories(args)) {
    result.trajectories = oracle_trajectories(graph, plan.starts, plan.model, plan.termination, args.seed);
  } else {
    NullSink null;
    oracle_run(graph, plan.starts, plan.model, plan.termination, args.seed, null);
  }
  write_outputs(args, result, store.meta().id_width, false);
  return result;
}

TrainResult cmd_train_loader(const RunArgs& args, const fs::path& model_out, const TimingHook& timing) {
  const GraphStore store = GraphStore::open(args.store);
  const TaskPlan plan = plan_task(make_task(args), store.degrees());
  TrainResult result;
  for (auto policy : {LoadingPolicy::AlwaysFull, LoadingPolicy::AlwaysOnDemand}) {
    EngineConfig cfg = make_config(args, plan);
    cfg.loading = policy;
    cfg.samples = &result.samples;
    cfg.timing = timing;
    run(store, plan.starts, cfg);
  }
  result.model = LoaderModel::train(result.samples.samples());
  if (!result.model.global()) {
    spdlog::warn("calibration produced too few usable samples; the model falls back to full loads");
  }
  result.model_path = model_out.empty() ? default_model_path(args) : model_out;
  result.model.save(result.model_path);
  result.samples.save_csv(result.model_path.parent_path() / "loader_samples.csv");
  return result;
}

std::vector<BenchRow> cmd_bench_schedulers(const RunArgs& args, std::ostream& csv) {
  const GraphStore store = GraphStore::open(args.store);
  const TaskPlan plan = plan_task(make_task(args), store.degrees());
  LoaderModel model;
  const bool learned = parse_loading_policy(args.loading) == LoadingPolicy::Learned;
  if (learned) model = LoaderModel::load(default_model_path(args));

  std::vector<BenchRow> rows;
  csv << "strategy,engine,block_io_count,block_io_bytes,wall_time_seconds,block_loads,time_slots\n";
  for (auto mode : {EngineMode::Triangular, EngineMode::PlainBucket}) {
    for (auto kind : {SchedulerKind::Iteration, SchedulerKind::Alphabet, SchedulerKind::MinHeight,
                      SchedulerKind::MaxSum, SchedulerKind::GWMix}) {
      EngineConfig cfg = make_config(args, plan);
      cfg.mode = mode;
      cfg.scheduler = kind;
      if (learned) cfg.loader = &model;
      const Metrics m = run(store, plan.starts, cfg);
      BenchRow row{to_string(kind), to_string(mode), m.block_io_count, m.block_io_bytes, m.block_loads(),
                   m.time_slots, m.wall_seconds};
      csv << fmt::format("{},{},{},{},{:.6f},{},{}\n", row.scheduler, row.engine, row.block_io_count,
                         row.block_io_bytes, row.wall_seconds, row.block_loads, row.time_slots);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

EdgeList cmd_gen(const GenArgs& args) {
  EdgeList list;
  if (args.kind == "er") {
    list = synthetic::erdos_renyi(args.n, args.avg_degree, args.seed);
  } else if (args.kind == "star") {
    list = synthetic::star(args.leaves);
  } else if (args.kind == "twocommunity") {
    list = synthetic::two_community(args.n, args.p_in, args.p_out, args.seed);
  } else {
    throw std::invalid_argument("unknown generator '" + args.kind + "'");
  }
  if (!args.out.empty()) write_edge_list(args.out, list);
  return list;
}

}  // namespace grasorw::cli
