#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/spdlog.h>

#include "grasorw/commands.hpp"

namespace {

using grasorw::cli::RunArgs;

void add_run_options(CLI::App* cmd, RunArgs& a, std::string& scheduler) {
  cmd->add_option("--store", a.store, "store directory")->required();
  cmd->add_option("--task", a.task, "rwnv | prnv | deepwalk")->check(CLI::IsMember({"rwnv", "prnv", "deepwalk"}));
  cmd->add_option("--p", a.p, "node2vec return parameter");
  cmd->add_option("--q", a.q, "node2vec in-out parameter");
  cmd->add_option("--walks-per-vertex", a.walks_per_vertex);
  cmd->add_option("--length", a.length, "walk length in vertices");
  cmd->add_option("--decay", a.decay, "PRNV continuation probability");
  cmd->add_option("--max-length", a.max_length, "PRNV length cap");
  cmd->add_option("--samples-per-query", a.samples_per_query, "PRNV walks per query (default 4|V|)");
  cmd->add_option("--query-nodes", a.query_nodes, "file with one query vertex per line");
  cmd->add_option("--threads", a.threads)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed);
  cmd->add_flag("--deterministic", a.deterministic, "key every draw by walk and hop");
  cmd->add_option("--scheduler", scheduler, "iteration | alphabet | minheight | maxsum | gwmix")
      ->check(CLI::IsMember({"iteration", "alphabet", "minheight", "maxsum", "gwmix"}));
  cmd->add_option("--engine", a.engine, "triangular | plainbucket")
      ->check(CLI::IsMember({"triangular", "plainbucket"}));
  cmd->add_option("--loading", a.loading, "full | ondemand | learned")
      ->check(CLI::IsMember({"full", "ondemand", "learned"}));
  cmd->add_option("--loader-model", a.loader_model, "model file (default <store>/loader_model.json)");
  cmd->add_option("--metrics-out", a.metrics_out, "metrics JSON (default stdout)");
  cmd->add_option("--traj-out", a.traj_out, "trajectory file or 'null'");
  cmd->add_option("--ppr-out", a.ppr_out, "PRNV estimates JSON (default stdout)");
  cmd->add_option("--work-dir", a.work_dir, "directory for walk pool files");
  cmd->add_option("--flush-threshold", a.flush_threshold, "walks kept in memory per pool");
  cmd->add_option("--top-k", a.top_k, "vertices listed per PRNV query");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("GRASORW_LOG")) spdlog::cfg::helpers::load_levels(level);

  CLI::App app{"Out-of-core second-order random walks over block-partitioned graphs"};
  app.require_subcommand(1);

  grasorw::cli::PartitionArgs part;
  std::string block_size = "16MiB";
  auto* partition = app.add_subcommand("partition", "convert an edge list into a block store");
  partition->add_option("--input", part.input, "edge list")->required();
  partition->add_option("--out", part.out, "store directory")->required();
  partition->add_option("--block-size", block_size, "bytes per block, e.g. 16MiB");
  partition->add_option("--block-file", part.block_file, "\"vertex block\" assignment file");
  partition->add_option("--id-width", part.id_width, "neighbor id bytes")->check(CLI::IsMember({4, 8}));

  RunArgs run_args;
  std::string scheduler;
  auto* run = app.add_subcommand("run", "execute a walk task on a store");
  add_run_options(run, run_args, scheduler);

  auto* oracle = app.add_subcommand("oracle", "execute a task in memory with deterministic keys");
  add_run_options(oracle, run_args, scheduler);

  std::filesystem::path model_out;
  auto* train = app.add_subcommand("train-loader", "calibrate the block loading model");
  add_run_options(train, run_args, scheduler);
  train->add_option("--model-out", model_out, "model file (default <store>/loader_model.json)");

  std::filesystem::path csv_out;
  auto* bench = app.add_subcommand("bench-schedulers", "compare current-block strategies");
  add_run_options(bench, run_args, scheduler);
  bench->add_option("--csv-out", csv_out, "CSV file (default stdout)");

  grasorw::cli::GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "write a synthetic edge list");
  gen->add_option("--kind", gen_args.kind, "er | star | twocommunity")
      ->check(CLI::IsMember({"er", "star", "twocommunity"}));
  gen->add_option("--n", gen_args.n, "vertex count");
  gen->add_option("--avg-degree", gen_args.avg_degree);
  gen->add_option("--leaves", gen_args.leaves);
  gen->add_option("--p-in", gen_args.p_in);
  gen->add_option("--p-out", gen_args.p_out);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--out", gen_args.out, "edge list file")->required();

  CLI11_PARSE(app, argc, argv);
  if (!scheduler.empty()) run_args.scheduler = scheduler;

  try {
    if (*partition) {
      part.block_size = grasorw::cli::parse_size(block_size);
      auto store = grasorw::cli::cmd_partition(part);
      std::cout << "wrote " << store.block_count() << " blocks to " << part.out.string() << '\n';
    } else if (*run) {
      grasorw::cli::cmd_run(run_args);
    } else if (*oracle) {
      grasorw::cli::cmd_oracle(run_args);
    } else if (*train) {
      auto result = grasorw::cli::cmd_train_loader(run_args, model_out);
      std::cout << "wrote " << result.model_path.string() << '\n';
    } else if (*bench) {
      if (csv_out.empty()) {
        grasorw::cli::cmd_bench_schedulers(run_args, std::cout);
      } else {
        std::ofstream csv(csv_out);
        if (!csv) throw grasorw::Error("cannot create '" + csv_out.string() + "'");
        grasorw::cli::cmd_bench_schedulers(run_args, csv);
      }
    } else if (*gen) {
      auto list = grasorw::cli::cmd_gen(gen_args);
      std::cout << "wrote " << list.edges.size() << " edges to " << gen_args.out.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
