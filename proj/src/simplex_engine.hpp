#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "basis_factor.hpp"
#include "relulab/lin_model.hpp"
#include "relulab/simplex.hpp"

namespace relulab::detail {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };
enum class ColumnKind : std::uint8_t { Structural, Logical, Artificial };
enum class EngineStatus { Optimal, Infeasible, Unbounded, Cutoff };

struct TableauRow {
  int basic_var = -1;
  double value = 0.0;
  // Nonbasic columns j with alpha_j = (B^{-1} a_j)_r; x_B + sum alpha_j x_j = 0.
  std::vector<std::pair<int, double>> entries;
};

/// Bounded-variable revised simplex in minimization form.
///
/// Columns are the model's structural variables followed by one logical per
/// row (A x - r = 0, with r bounded by the row's relation) and, after phase 1
/// has run, artificial columns fixed at zero. The engine keeps its basis
/// between calls so branch-and-bound can change bounds or append rows and
/// reoptimize with the dual simplex.
class SimplexEngine {
 public:
  SimplexEngine(const LinModel& model, const SimplexOptions& options);

  int num_structural() const { return n_struct_; }
  int num_rows() const { return m_; }
  int num_columns() const { return static_cast<int>(cols_.size()); }

  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return up_[j]; }
  void set_bounds(int j, double lo, double up);

  ColumnKind kind(int j) const { return kind_[j]; }
  VarState state(int j) const { return state_[j]; }
  int logical_row(int j) const { return logical_row_[j]; }
  const std::vector<std::pair<int, double>>& row(int i) const { return rows_[i]; }

  // Two-phase primal simplex from the slack basis.
  EngineStatus solve();
  // Dual simplex from the current basis; falls back to solve() when the
  // basis is missing, dual infeasible or singular. Stops with Cutoff once
  // the objective provably exceeds `cutoff`.
  EngineStatus reoptimize(double cutoff = kInf);

  // Appends the row lo <= sum coef * x_struct <= hi with its logical basic.
  void add_row(const std::vector<std::pair<int, double>>& coeffs, double lo, double hi);

  TableauRow tableau_row(int basis_pos);
  int basis_position(int j) const { return basis_pos_[j]; }

  double value(int j) const { return x_[j]; }
  std::vector<double> structural_values() const;
  double objective() const;  // c.x in minimization form, no offset
  long iterations() const { return iterations_; }

 private:
  class Singular {};

  void init_slack_basis();
  void refactor();
  void recompute_basics();
  void compute_duals(std::vector<double>& y) const;
  double column_dot(int j, const std::vector<double>& y) const;
  void column_dense(int j, std::vector<double>& out) const;
  void pivot(int pos, int entering, const std::vector<double>& alpha);
  EngineStatus run_primal(bool phase_one);
  EngineStatus run_dual(double cutoff);
  bool drive_out_artificials();
  void check_iteration_limit(long local_iters);

  SimplexOptions opt_;
  int n_struct_ = 0;
  int m_ = 0;
  std::vector<SparseColumn> cols_;
  std::vector<std::vector<std::pair<int, double>>> rows_;  // structural coefficients per row
  std::vector<ColumnKind> kind_;
  std::vector<int> logical_row_;     // row of a logical/artificial column, -1 for structurals
  std::vector<int> row_artificial_;  // artificial column per row or -1
  std::vector<int> row_logical_;     // logical column of each row
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<double> phase_cost_;
  std::vector<VarState> state_;
  std::vector<int> basis_;      // column in each basis position
  std::vector<int> basis_pos_;  // position of each column or -1
  BasisFactor factor_;
  bool have_basis_ = false;
  bool factor_stale_ = true;
  bool bland_ = false;
  long iterations_ = 0;
};

}  // namespace relulab::detail
