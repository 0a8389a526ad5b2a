#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relulab/milp.hpp"
#include "relulab/nn_embed.hpp"
#include "relulab/relu_net.hpp"

namespace relulab {

// Largest n accepted by the benchmark unless `allow_large` is set.
inline constexpr int kBenchDefaultMaxN = 100;

// Solver settings used by bench and solve: the default config with a tighter
// relative gap, so objectives of different encodings agree to 1e-5 even when
// the optimum is in the tens of thousands.
MilpConfig bench_milp_config(double time_limit_s = kInf);

struct BenchOptions {
  std::vector<int> n_list;
  int seeds = 0;                 // seeds first_seed .. first_seed + seeds - 1
  std::uint64_t first_seed = 1;
  std::vector<Encoding> encodings{Encoding::ReluPlus, Encoding::Classic};
  BigMPolicy big_m;
  MilpConfig milp = bench_milp_config();
  int workers = 1;
  bool include_build = false;
  bool allow_large = false;
};

struct BenchRun {
  int n = 0;
  std::uint64_t seed = 0;
  Encoding encoding = Encoding::ReluPlus;
  MilpStatus status = MilpStatus::Infeasible;
  double objective = 0.0;
  double solve_ms = 0.0;
  double build_ms = 0.0;  // instance generation + encoding
  long simplex_iterations = 0;
  long nodes = 0;
  std::string config_hash;
  std::string rng;
  int workers = 1;
};

struct BenchAggregate {
  int n = 0;
  Encoding encoding = Encoding::ReluPlus;
  int runs = 0;
  int solved = 0;         // Optimal runs, the only ones entering the statistics
  int limit_reached = 0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;  // population
  double mean_total_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchRun> runs;
  std::vector<BenchAggregate> aggregates;
  bool include_build = false;

  int limit_reached() const;
};

/// Generates, encodes and solves every (n, seed, encoding) combination.
/// Runs are spread over `workers` threads; each owns its model and solver,
/// and rows come back in (n, seed, encoding) order regardless of scheduling.
BenchReport run_bench(const ReluNet& net, const BenchOptions& options);

// Per (n, encoding) in first-appearance order. Means and population stddev
// are over Optimal rows in row order.
std::vector<BenchAggregate> aggregate_runs(const std::vector<BenchRun>& runs);

std::string runs_csv(const BenchReport& report);
std::string aggregate_csv(const BenchReport& report);

}  // namespace relulab
