#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "relulab/bench.hpp"
#include "relulab/error.hpp"
#include "relulab/knapsack.hpp"
#include "relulab/nn_embed.hpp"
#include "relulab/relu_net.hpp"

namespace relulab {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInputError = 2,
  kExitSolverLimit = 3,
};

// Maps a library error onto the CLI exit codes.
int exit_code_for(ErrorCode code);

// Inclusive integer range "lo:hi"; lo > hi is an empty grid.
struct GridRange {
  int lo = 0;
  int hi = 10;

  static GridRange parse(std::string_view text);
  bool empty() const { return lo > hi; }
};

struct VerifyOptions {
  GridRange grid;
  BigMPolicy big_m;
  double tol = 1e-6;
};

/// Exactness suite over the grid: ReLU+ min-theta and classic max/min-theta
/// must reproduce forward(x), and ReLU+ max-theta must be unbounded.
int cmd_verify(const ReluNet& net, const VerifyOptions& options, std::ostream& out);

struct EncodingCounts {
  int variables = 0;
  int continuous = 0;
  int integer = 0;
  int binary = 0;
  int rows = 0;
  int bound_constraints = 0;  // copy limits carried as variable bounds

  int constraints() const { return rows + bound_constraints; }
};

EncodingCounts count_encoding(const KnapsackModel& km);

/// Writes the LP file (to `lp_out`) and the counts (to `info`).
int cmd_encode(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding, const BigMPolicy& big_m,
               std::ostream& lp_out, std::ostream& info);

/// Solves one instance and prints the solution JSON.
int cmd_solve(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding, const BigMPolicy& big_m,
              double time_limit_s, std::ostream& out);

/// Runs the benchmark. With an empty `out_path` both CSV tables go to `out`;
/// otherwise runs go to out_path and aggregates to <stem>_aggregate<ext>.
int cmd_bench(const ReluNet& net, const BenchOptions& options, const std::filesystem::path& out_path,
              std::ostream& out);

std::filesystem::path aggregate_path_for(const std::filesystem::path& runs_path);

}  // namespace relulab
