#pragma once

#include <vector>

#include "relulab/lin_model.hpp"

namespace relulab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;
  // Eta-file length before the basis is refactorized.
  int refactor_interval = 100;
  // Dantzig pricing switches to Bland's rule after this many multiples of
  // (rows + columns) iterations in one solve.
  int bland_factor = 5;
};

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // one per model variable; empty unless Optimal
  double objective = 0.0;      // model sense, offset included
  long iterations = 0;
};

/// Two-phase bounded primal simplex on a sparse LU-factored basis.
///
/// With `relax_integrality` integer and binary variables are treated as
/// continuous over their bounds; without it the model must be purely
/// continuous (Error PreconditionViolated otherwise). Throws
/// Error(NumericalBreakdown) when pivoting cannot make progress even under
/// Bland's rule or the basis becomes singular beyond repair.
SimplexResult solve_lp(const LinModel& model, bool relax_integrality, const SimplexOptions& options = {});

}  // namespace relulab
