// relulab: verify, encode, solve and benchmark ReLU network embeddings.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relulab/commands.hpp"
#include "relulab/error.hpp"
#include "relulab/relu_net_io.hpp"

#ifndef RELULAB_DATA_DIR
#define RELULAB_DATA_DIR "data"
#endif

using namespace relulab;

namespace {

struct NetArgs {
  std::string weights = std::string(RELULAB_DATA_DIR) + "/square_net_weights.csv";
  std::string biases = std::string(RELULAB_DATA_DIR) + "/square_net_biases.csv";
  std::string layers = std::string(RELULAB_DATA_DIR) + "/square_net_layers.json";

  ReluNet load() const {
    // --layers takes either a JSON sidecar or an inline list like 1,3,10,1.
    const std::vector<int> sizes = std::filesystem::exists(layers) ? load_layer_sizes_file(layers)
                                                                     : parse_layer_sizes_list(layers);
    return load_net_files(weights, biases, sizes);
  }
};

struct InstanceArgs {
  std::string instance;
  int n = 1;
  unsigned long long seed = 1;

  KnapsackInstance load() const {
    if (instance.empty()) return generate_instance(n, seed);
    std::ifstream in(instance);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + instance);
    try {
      return instance_from_json(in);
    } catch (const Error& e) {
      throw Error(e.code(), instance + ": " + e.detail());
    }
  }
};

void add_net_options(CLI::App* cmd, NetArgs& net) {
  cmd->add_option("--net", net.weights, "weight table CSV (j_hat,i,j,w)")->capture_default_str();
  cmd->add_option("--bias", net.biases, "bias table CSV (i,j,b)")->capture_default_str();
  cmd->add_option("--layers", net.layers, "layer sizes: JSON sidecar or list like 1,3,10,1")->capture_default_str();
}

void add_instance_options(CLI::App* cmd, InstanceArgs& inst) {
  cmd->add_option("--instance", inst.instance, "instance JSON; generated from --n/--seed when omitted");
  cmd->add_option("--n", inst.n, "number of item classes for a generated instance")->capture_default_str();
  cmd->add_option("--seed", inst.seed, "generator seed")->capture_default_str();
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  return &file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ReLU network embeddings in mixed-integer knapsack models"};
  app.require_subcommand(1);

  NetArgs net;
  InstanceArgs inst;
  std::string encoding = "reluplus";
  std::string big_m = "pernode";
  std::string out;
  double time_limit = 0.0;

  auto* verify = app.add_subcommand("verify", "check both encodings against the forward pass on an integer grid");
  std::string grid = "0:10";
  add_net_options(verify, net);
  verify->add_option("--grid", grid, "inclusive integer range lo:hi")->capture_default_str();
  verify->add_option("--big-m", big_m, "pernode | global:VALUE")->capture_default_str();

  auto* encode = app.add_subcommand("encode", "write the embedded knapsack model in LP format");
  add_net_options(encode, net);
  add_instance_options(encode, inst);
  encode->add_option("--encoding", encoding, "classic | reluplus")->capture_default_str();
  encode->add_option("--big-m", big_m, "pernode | global:VALUE")->capture_default_str();
  encode->add_option("--out", out, "LP file (stdout when omitted)");

  auto* solve = app.add_subcommand("solve", "solve one knapsack instance and print the solution as JSON");
  add_net_options(solve, net);
  add_instance_options(solve, inst);
  solve->add_option("--encoding", encoding, "classic | reluplus")->capture_default_str();
  solve->add_option("--big-m", big_m, "pernode | global:VALUE")->capture_default_str();
  solve->add_option("--time-limit", time_limit, "seconds, 0 for none")->capture_default_str();
  solve->add_option("--out", out, "JSON file (stdout when omitted)");

  auto* bench = app.add_subcommand("bench", "time both encodings over seeded instances");
  std::vector<int> n_list{10};
  int seeds = 30;
  unsigned long long first_seed = 1;
  std::vector<std::string> encodings{"reluplus", "classic"};
  int workers = 1;
  bool include_build = false;
  bool allow_large = false;
  add_net_options(bench, net);
  bench->add_option("--n", n_list, "instance sizes, e.g. --n 10,100")->delimiter(',')->capture_default_str();
  bench->add_option("--seeds", seeds, "number of seeds per size")->capture_default_str();
  bench->add_option("--seed", first_seed, "first seed")->capture_default_str();
  bench->add_option("--encoding", encodings, "encodings to run")->delimiter(',')->capture_default_str();
  bench->add_option("--big-m", big_m, "pernode | global:VALUE")->capture_default_str();
  bench->add_option("--time-limit", time_limit, "seconds per solve, 0 for none")->capture_default_str();
  bench->add_option("--workers", workers, "parallel solves")->capture_default_str();
  bench->add_flag("--include-build", include_build, "add generation+encoding time columns");
  bench->add_flag("--allow-large", allow_large, "permit n above 100");
  bench->add_option("--out", out, "per-run CSV; aggregates go next to it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  const double limit = time_limit > 0.0 ? time_limit : kInf;
  try {
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.grid = GridRange::parse(grid);
      opt.big_m = BigMPolicy::parse(big_m);
      return cmd_verify(net.load(), opt, std::cout);
    }
    if (encode->parsed()) {
      const ReluNet model_net = net.load();
      const KnapsackInstance instance = inst.load();
      std::ofstream file;
      std::ostream* lp = open_out(out, file);
      // Counts go to stderr when the LP itself is on stdout.
      return cmd_encode(instance, model_net, parse_encoding(encoding), BigMPolicy::parse(big_m), *lp,
                        lp == &std::cout ? std::cerr : std::cout);
    }
    if (solve->parsed()) {
      const ReluNet model_net = net.load();
      const KnapsackInstance instance = inst.load();
      std::ofstream file;
      return cmd_solve(instance, model_net, parse_encoding(encoding), BigMPolicy::parse(big_m), limit,
                       *open_out(out, file));
    }
    if (bench->parsed()) {
      BenchOptions opt;
      opt.n_list = n_list;
      opt.seeds = seeds;
      opt.first_seed = first_seed;
      opt.encodings.clear();
      for (const std::string& e : encodings) opt.encodings.push_back(parse_encoding(e));
      opt.big_m = BigMPolicy::parse(big_m);
      opt.milp = bench_milp_config(limit);
      opt.workers = workers;
      opt.include_build = include_build;
      opt.allow_large = allow_large;
      return cmd_bench(net.load(), opt, out, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
