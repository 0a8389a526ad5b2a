#include "relulab/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "relulab/error.hpp"
#include "simplex_engine.hpp"

namespace relulab {

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace detail {

SimplexEngine::SimplexEngine(const LinModel& model, const SimplexOptions& options) : opt_(options) {
  n_struct_ = model.num_vars();
  m_ = model.num_constraints();
  const int ncols = n_struct_ + m_;
  cols_.resize(ncols);
  kind_.assign(ncols, ColumnKind::Structural);
  logical_row_.assign(ncols, -1);
  lo_.resize(ncols);
  up_.resize(ncols);
  cost_.assign(ncols, 0.0);
  x_.assign(ncols, 0.0);
  state_.assign(ncols, VarState::AtLower);
  basis_pos_.assign(ncols, -1);
  row_artificial_.assign(m_, -1);
  row_logical_.resize(m_);
  rows_.resize(m_);

  for (int j = 0; j < n_struct_; ++j) {
    lo_[j] = model.variables()[j].lower;
    up_[j] = model.variables()[j].upper;
  }
  const double sign = model.objective().sense == Sense::Maximize ? -1.0 : 1.0;
  for (const Term& t : model.objective().expr.terms()) cost_[t.var.index] += sign * t.coef;

  for (int i = 0; i < m_; ++i) {
    const Constraint& c = model.constraints()[i];
    for (const Term& t : c.expr.terms()) {
      cols_[t.var.index].rows.push_back(i);
      cols_[t.var.index].vals.push_back(t.coef);
      rows_[i].emplace_back(t.var.index, t.coef);
    }
    const int l = n_struct_ + i;
    row_logical_[i] = l;
    kind_[l] = ColumnKind::Logical;
    logical_row_[l] = i;
    cols_[l].rows.push_back(i);
    cols_[l].vals.push_back(-1.0);
    lo_[l] = c.relation == Relation::LessEqual ? -kInf : c.rhs;
    up_[l] = c.relation == Relation::GreaterEqual ? kInf : c.rhs;
  }
}

void SimplexEngine::set_bounds(int j, double lo, double up) {
  lo_[j] = lo;
  up_[j] = up;
}

std::vector<double> SimplexEngine::structural_values() const {
  return {x_.begin(), x_.begin() + n_struct_};
}

double SimplexEngine::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_struct_; ++j) z += cost_[j] * x_[j];
  return z;
}

double SimplexEngine::column_dot(int j, const std::vector<double>& y) const {
  const SparseColumn& c = cols_[j];
  double s = 0.0;
  for (std::size_t k = 0; k < c.rows.size(); ++k) s += c.vals[k] * y[c.rows[k]];
  return s;
}

void SimplexEngine::column_dense(int j, std::vector<double>& out) const {
  out.assign(m_, 0.0);
  const SparseColumn& c = cols_[j];
  for (std::size_t k = 0; k < c.rows.size(); ++k) out[c.rows[k]] = c.vals[k];
}

void SimplexEngine::refactor() {
  std::vector<const SparseColumn*> cols(m_);
  for (int i = 0; i < m_; ++i) cols[i] = &cols_[basis_[i]];
  if (!factor_.factorize(m_, cols)) throw Singular{};
  factor_stale_ = false;
  recompute_basics();
}

void SimplexEngine::recompute_basics() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < num_columns(); ++j) {
    if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
    const SparseColumn& c = cols_[j];
    for (std::size_t k = 0; k < c.rows.size(); ++k) rhs[c.rows[k]] -= c.vals[k] * x_[j];
  }
  factor_.ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[basis_[i]] = rhs[i];
}

void SimplexEngine::compute_duals(std::vector<double>& y) const {
  y.resize(m_);
  const std::vector<double>& c = phase_cost_.empty() ? cost_ : phase_cost_;
  for (int i = 0; i < m_; ++i) y[i] = c[basis_[i]];
  factor_.btran(y);
}

void SimplexEngine::pivot(int pos, int entering, const std::vector<double>& alpha) {
  basis_pos_[basis_[pos]] = -1;
  basis_[pos] = entering;
  basis_pos_[entering] = pos;
  state_[entering] = VarState::Basic;
  factor_.push_eta(pos, alpha);
}

void SimplexEngine::check_iteration_limit(long local_iters) {
  const long span = static_cast<long>(m_) + num_columns();
  if (local_iters > static_cast<long>(opt_.bland_factor) * span) bland_ = true;
  if (local_iters > 50L * span + 100000L) {
    throw Error(ErrorCode::NumericalBreakdown, "simplex made no progress after " +
                                                   std::to_string(local_iters) + " iterations");
  }
}

void SimplexEngine::init_slack_basis() {
  const int ncols = num_columns();
  basis_.assign(m_, -1);
  std::fill(basis_pos_.begin(), basis_pos_.end(), -1);
  for (int j = 0; j < ncols; ++j) {
    if (kind_[j] == ColumnKind::Artificial) {
      lo_[j] = up_[j] = 0.0;
    }
    if (kind_[j] == ColumnKind::Logical) continue;
    if (std::isfinite(lo_[j])) {
      state_[j] = VarState::AtLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = up_[j];
    } else {
      state_[j] = VarState::FreeZero;
      x_[j] = 0.0;
    }
  }

  phase_cost_.assign(ncols, 0.0);
  for (int i = 0; i < m_; ++i) {
    double act = 0.0;
    for (const auto& [j, a] : rows_[i]) act += a * x_[j];
    const int l = row_logical_[i];
    if (act >= lo_[l] - opt_.feasibility_tol && act <= up_[l] + opt_.feasibility_tol) {
      basis_[i] = l;
      basis_pos_[l] = i;
      state_[l] = VarState::Basic;
      x_[l] = act;
      continue;
    }
    const double bound = act < lo_[l] ? lo_[l] : up_[l];
    state_[l] = act < lo_[l] ? VarState::AtLower : VarState::AtUpper;
    x_[l] = bound;
    // act - bound + sign * a = 0 with a >= 0.
    const double sign = bound > act ? 1.0 : -1.0;
    int art = row_artificial_[i];
    if (art < 0) {
      art = num_columns();
      cols_.push_back({{i}, {sign}});
      kind_.push_back(ColumnKind::Artificial);
      logical_row_.push_back(i);
      lo_.push_back(0.0);
      up_.push_back(kInf);
      cost_.push_back(0.0);
      x_.push_back(0.0);
      state_.push_back(VarState::Basic);
      basis_pos_.push_back(-1);
      phase_cost_.push_back(0.0);
      row_artificial_[i] = art;
    } else {
      cols_[art].vals[0] = sign;
      up_[art] = kInf;
    }
    phase_cost_[art] = 1.0;
    state_[art] = VarState::Basic;
    x_[art] = std::abs(bound - act);
    basis_[i] = art;
    basis_pos_[art] = i;
  }
  factor_stale_ = true;
  refactor();
}

EngineStatus SimplexEngine::solve() {
  for (int attempt = 0;; ++attempt) {
    try {
      have_basis_ = false;
      init_slack_basis();
      const bool need_phase_one = std::any_of(basis_.begin(), basis_.end(), [&](int j) {
        return kind_[j] == ColumnKind::Artificial;
      });
      if (need_phase_one) {
        run_primal(true);
        double worst = 0.0;
        for (int j = 0; j < num_columns(); ++j) {
          if (kind_[j] == ColumnKind::Artificial) worst = std::max(worst, x_[j]);
        }
        if (worst > opt_.feasibility_tol) {
          phase_cost_.clear();
          return EngineStatus::Infeasible;
        }
      }
      phase_cost_.clear();
      for (int j = 0; j < num_columns(); ++j) {
        if (kind_[j] != ColumnKind::Artificial) continue;
        up_[j] = 0.0;
        if (state_[j] != VarState::Basic) {
          state_[j] = VarState::AtLower;
          x_[j] = 0.0;
        }
      }
      if (need_phase_one) drive_out_artificials();
      const EngineStatus st = run_primal(false);
      have_basis_ = st == EngineStatus::Optimal;
      return st;
    } catch (const Singular&) {
      phase_cost_.clear();
      if (attempt > 0) throw Error(ErrorCode::NumericalBreakdown, "basis matrix became singular");
    }
  }
}

bool SimplexEngine::drive_out_artificials() {
  bool all_out = true;
  std::vector<double> rho;
  std::vector<double> alpha;
  for (int pos = 0; pos < m_; ++pos) {
    const int art = basis_[pos];
    if (kind_[art] != ColumnKind::Artificial) continue;
    rho.assign(m_, 0.0);
    rho[pos] = 1.0;
    factor_.btran(rho);
    int best = -1;
    double best_mag = 1e-7;
    for (int j = 0; j < num_columns(); ++j) {
      if (state_[j] == VarState::Basic || kind_[j] == ColumnKind::Artificial) continue;
      const double a = std::abs(column_dot(j, rho));
      if (a > best_mag) {
        best_mag = a;
        best = j;
      }
    }
    if (best < 0) {
      all_out = false;  // redundant row; the artificial stays basic at zero
      continue;
    }
    column_dense(best, alpha);
    factor_.ftran(alpha);
    pivot(pos, best, alpha);
    state_[art] = VarState::AtLower;
    x_[art] = 0.0;
    if (factor_.eta_count() >= opt_.refactor_interval) refactor();
  }
  refactor();
  return all_out;
}

EngineStatus SimplexEngine::run_primal(bool phase_one) {
  const std::vector<double>& c = phase_one ? phase_cost_ : cost_;
  if (!phase_one) phase_cost_.clear();
  bland_ = false;
  long local = 0;
  std::vector<double> y;
  std::vector<double> alpha;
  const double harris = 1e-9;

  for (;;) {
    if (factor_stale_ || factor_.eta_count() >= opt_.refactor_interval) refactor();
    y.resize(m_);
    for (int i = 0; i < m_; ++i) y[i] = c[basis_[i]];
    factor_.btran(y);

    int q = -1;
    double best = 0.0;
    for (int j = 0; j < num_columns(); ++j) {
      const VarState s = state_[j];
      if (s == VarState::Basic || lo_[j] == up_[j]) continue;
      const double d = c[j] - column_dot(j, y);
      double score = 0.0;
      if (s == VarState::AtLower && d < -opt_.optimality_tol) {
        score = -d;
      } else if (s == VarState::AtUpper && d > opt_.optimality_tol) {
        score = d;
      } else if (s == VarState::FreeZero && std::abs(d) > opt_.optimality_tol) {
        score = std::abs(d);
      }
      if (score <= 0.0) continue;
      if (bland_) {
        q = j;
        best = d;
        break;
      }
      if (score > std::abs(best)) {
        best = d;
        q = j;
      }
    }
    if (q < 0) return EngineStatus::Optimal;

    const double dir = best < 0 ? 1.0 : -1.0;
    column_dense(q, alpha);
    factor_.ftran(alpha);

    // Harris two-pass ratio test over the basic variables.
    double t_max = kInf;
    const double tol = bland_ ? 0.0 : harris;
    for (int i = 0; i < m_; ++i) {
      if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
      const int b = basis_[i];
      const double g = -dir * alpha[i];
      if (g < 0 && std::isfinite(lo_[b])) {
        t_max = std::min(t_max, (std::max(0.0, x_[b] - lo_[b]) + tol) / -g);
      } else if (g > 0 && std::isfinite(up_[b])) {
        t_max = std::min(t_max, (std::max(0.0, up_[b] - x_[b]) + tol) / g);
      }
    }
    int r = -1;
    double r_ratio = kInf;
    double r_mag = 0.0;
    for (int i = 0; i < m_ && std::isfinite(t_max); ++i) {
      if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
      const int b = basis_[i];
      const double g = -dir * alpha[i];
      double ratio = kInf;
      if (g < 0 && std::isfinite(lo_[b])) {
        ratio = std::max(0.0, x_[b] - lo_[b]) / -g;
      } else if (g > 0 && std::isfinite(up_[b])) {
        ratio = std::max(0.0, up_[b] - x_[b]) / g;
      }
      if (ratio > t_max) continue;
      bool take = false;
      if (r < 0) {
        take = true;
      } else if (bland_) {
        take = ratio < r_ratio - 1e-12 || (ratio <= r_ratio + 1e-12 && b < basis_[r]);
      } else {
        take = std::abs(alpha[i]) > r_mag;
      }
      if (take) {
        r = i;
        r_ratio = ratio;
        r_mag = std::abs(alpha[i]);
      }
    }

    const double span = up_[q] - lo_[q];
    const bool flip = std::isfinite(span) && (r < 0 || span <= r_ratio);
    if (r < 0 && !flip) {
      if (phase_one) throw Error(ErrorCode::NumericalBreakdown, "phase one reported unbounded");
      return EngineStatus::Unbounded;
    }
    const double t = flip ? span : r_ratio;
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0.0) x_[basis_[i]] -= dir * t * alpha[i];
    }
    if (flip) {
      state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
      x_[q] = state_[q] == VarState::AtLower ? lo_[q] : up_[q];
    } else {
      x_[q] += dir * t;
      const int leaving = basis_[r];
      const bool to_lower = -dir * alpha[r] < 0;
      state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
      x_[leaving] = to_lower ? lo_[leaving] : up_[leaving];
      pivot(r, q, alpha);
    }
    ++iterations_;
    check_iteration_limit(++local);
  }
}

EngineStatus SimplexEngine::reoptimize(double cutoff) {
  if (!have_basis_) return solve();
  try {
    if (factor_stale_) refactor();
    std::vector<double> y;
    compute_duals(y);
    for (int j = 0; j < num_columns(); ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (lo_[j] == up_[j]) {
        state_[j] = VarState::AtLower;
        x_[j] = lo_[j];
        continue;
      }
      const double d = cost_[j] - column_dot(j, y);
      VarState want = state_[j];
      if (d > opt_.optimality_tol) {
        want = VarState::AtLower;
      } else if (d < -opt_.optimality_tol) {
        want = VarState::AtUpper;
      } else if (want == VarState::FreeZero || (want == VarState::AtLower && !std::isfinite(lo_[j])) ||
                 (want == VarState::AtUpper && !std::isfinite(up_[j]))) {
        want = std::isfinite(lo_[j]) ? VarState::AtLower
               : std::isfinite(up_[j]) ? VarState::AtUpper
                                       : VarState::FreeZero;
      }
      const double target = want == VarState::AtLower ? lo_[j] : want == VarState::AtUpper ? up_[j] : 0.0;
      if (!std::isfinite(target)) return solve();  // dual infeasible start
      state_[j] = want;
      x_[j] = target;
    }
    recompute_basics();
    const EngineStatus st = run_dual(cutoff);
    if (st != EngineStatus::Optimal) return st;
    // Clean up any dual infeasibility the Harris ratio test let through.
    const EngineStatus polished = run_primal(false);
    have_basis_ = polished == EngineStatus::Optimal;
    return polished;
  } catch (const Singular&) {
    return solve();
  }
}

EngineStatus SimplexEngine::run_dual(double cutoff) {
  bland_ = false;
  long local = 0;
  std::vector<double> y;
  std::vector<double> rho;
  std::vector<double> alpha;
  std::vector<double> d(num_columns(), 0.0);
  std::vector<double> row_alpha(num_columns(), 0.0);

  for (;;) {
    if (factor_stale_ || factor_.eta_count() >= opt_.refactor_interval) refactor();

    int r = -1;
    double worst = opt_.feasibility_tol;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      const double infeas = std::max(lo_[b] - x_[b], x_[b] - up_[b]);
      if (infeas <= opt_.feasibility_tol) continue;
      if (bland_) {
        if (r < 0 || b < basis_[r]) r = i;
      } else if (infeas > worst) {
        worst = infeas;
        r = i;
      }
    }
    if (r < 0) return EngineStatus::Optimal;

    if (std::isfinite(cutoff) && objective() > cutoff) return EngineStatus::Cutoff;

    compute_duals(y);
    rho.assign(m_, 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);

    const int leaving = basis_[r];
    const bool to_lower = x_[leaving] < lo_[leaving];
    const double harris = bland_ ? 0.0 : opt_.optimality_tol;
    double bound = kInf;
    for (int j = 0; j < num_columns(); ++j) {
      row_alpha[j] = 0.0;
      const VarState s = state_[j];
      if (s == VarState::Basic || lo_[j] == up_[j]) continue;
      const double a = column_dot(j, rho);
      if (std::abs(a) <= opt_.pivot_tol) continue;
      const bool can_inc = s == VarState::AtLower || s == VarState::FreeZero;
      const bool can_dec = s == VarState::AtUpper || s == VarState::FreeZero;
      const bool ok = to_lower ? ((a < 0 && can_inc) || (a > 0 && can_dec))
                               : ((a > 0 && can_inc) || (a < 0 && can_dec));
      if (!ok) continue;
      row_alpha[j] = a;
      d[j] = std::abs(cost_[j] - column_dot(j, y));
      bound = std::min(bound, (d[j] + harris) / std::abs(a));
    }
    int q = -1;
    double q_ratio = kInf;
    double q_mag = 0.0;
    for (int j = 0; j < num_columns() && std::isfinite(bound); ++j) {
      if (row_alpha[j] == 0.0) continue;
      const double mag = std::abs(row_alpha[j]);
      const double ratio = d[j] / mag;
      if (ratio > bound) continue;
      bool take = false;
      if (q < 0) {
        take = true;
      } else if (bland_) {
        take = ratio < q_ratio - 1e-12;
      } else {
        take = mag > q_mag;
      }
      if (take) {
        q = j;
        q_ratio = ratio;
        q_mag = mag;
      }
    }
    if (q < 0) return EngineStatus::Infeasible;

    column_dense(q, alpha);
    factor_.ftran(alpha);
    if (std::abs(alpha[r] - row_alpha[q]) > 1e-7 * (1.0 + std::abs(alpha[r])) ||
        std::abs(alpha[r]) <= opt_.pivot_tol) {
      if (factor_.eta_count() == 0) throw Singular{};
      factor_stale_ = true;
      continue;
    }
    const double target = to_lower ? lo_[leaving] : up_[leaving];
    const double delta = (x_[leaving] - target) / alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0.0) x_[basis_[i]] -= delta * alpha[i];
    }
    x_[q] += delta;
    state_[leaving] = to_lower ? VarState::AtLower : VarState::AtUpper;
    x_[leaving] = target;
    pivot(r, q, alpha);
    ++iterations_;
    check_iteration_limit(++local);
  }
}

void SimplexEngine::add_row(const std::vector<std::pair<int, double>>& coeffs, double lo, double hi) {
  const int r = m_;
  double act = 0.0;
  for (const auto& [j, a] : coeffs) {
    cols_[j].rows.push_back(r);
    cols_[j].vals.push_back(a);
    act += a * x_[j];
  }
  rows_.push_back(coeffs);
  const int l = num_columns();
  cols_.push_back({{r}, {-1.0}});
  kind_.push_back(ColumnKind::Logical);
  logical_row_.push_back(r);
  lo_.push_back(lo);
  up_.push_back(hi);
  cost_.push_back(0.0);
  x_.push_back(act);
  state_.push_back(VarState::Basic);
  basis_pos_.push_back(r);
  basis_.push_back(l);
  row_artificial_.push_back(-1);
  row_logical_.push_back(l);
  ++m_;
  factor_stale_ = true;
}

TableauRow SimplexEngine::tableau_row(int basis_pos) {
  if (factor_stale_) refactor();
  TableauRow row;
  row.basic_var = basis_[basis_pos];
  row.value = x_[row.basic_var];
  std::vector<double> rho(m_, 0.0);
  rho[basis_pos] = 1.0;
  factor_.btran(rho);
  for (int j = 0; j < num_columns(); ++j) {
    if (state_[j] == VarState::Basic) continue;
    const double a = column_dot(j, rho);
    if (std::abs(a) > 1e-12) row.entries.emplace_back(j, a);
  }
  return row;
}

}  // namespace detail

SimplexResult solve_lp(const LinModel& model, bool relax_integrality, const SimplexOptions& options) {
  if (!relax_integrality) {
    for (const Variable& v : model.variables()) {
      if (v.is_integer()) {
        throw Error(ErrorCode::PreconditionViolated,
                    "integer variable '" + v.name + "' in LP solve; relax integrality or use solve_milp");
      }
    }
  }
  detail::SimplexEngine engine(model, options);
  const detail::EngineStatus st = engine.solve();
  SimplexResult res;
  res.iterations = engine.iterations();
  switch (st) {
    case detail::EngineStatus::Optimal:
      res.status = LpStatus::Optimal;
      res.values = engine.structural_values();
      res.objective = model.evaluate_objective(res.values);
      break;
    case detail::EngineStatus::Unbounded: res.status = LpStatus::Unbounded; break;
    default: res.status = LpStatus::Infeasible; break;
  }
  return res;
}

}  // namespace relulab
