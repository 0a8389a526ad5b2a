#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relulab/lin_model.hpp"
#include "relulab/simplex.hpp"

namespace relulab {

enum class MilpStatus { Optimal, Infeasible, Unbounded, LimitReached };

std::string_view to_string(MilpStatus s);

struct MilpConfig {
  double int_tol = 1e-6;
  // A node is pruned when its bound cannot beat the incumbent by more than
  // max(gap_abs, gap_rel * |incumbent|).
  double gap_abs = 1e-6;
  double gap_rel = 1e-6;
  long node_limit = 10'000'000;
  double time_limit_s = kInf;
  // Child order: floor branch first when true.
  bool floor_first = true;
  // Rounds of Gomory mixed-integer cuts at the root; 0 disables them.
  int root_cut_rounds = 20;
  int max_cuts_per_round = 500;
  SimplexOptions lp;

  // Stable digest of every field, written into benchmark rows.
  std::string hash() const;
};

struct MilpResult {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values;  // best incumbent, integer variables rounded
  double objective = 0.0;      // incumbent objective, model sense
  double bound = 0.0;          // proven bound on the optimum, model sense
  double gap = 0.0;            // |bound - objective|
  bool has_incumbent = false;
  long nodes = 0;
  long simplex_iterations = 0;
  int cuts = 0;
  double root_bound = 0.0;
};

/// Depth-first LP-based branch-and-bound.
///
/// Branches on the most fractional integer variable (lowest index on ties),
/// warm-starts every node from the previous basis with the dual simplex and
/// strengthens the root relaxation with Gomory mixed-integer cuts. Hitting
/// the node or time limit returns LimitReached with the incumbent (if any)
/// and the best bound still open. NumericalBreakdown propagates.
MilpResult solve_milp(const LinModel& model, const MilpConfig& config = {});

}  // namespace relulab
