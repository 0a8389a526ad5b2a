#include "relulab/lin_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "relulab/error.hpp"

namespace relulab {

namespace {

bool valid_name(std::string_view name) {
  if (name.empty() || name.size() > 255) return false;
  if (std::isdigit(static_cast<unsigned char>(name.front())) || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '[' ||
           ch == ']' || ch == '#';
  });
}

}  // namespace

LinExpr LinExpr::normalized() const {
  LinExpr out;
  std::unordered_map<int, std::size_t> pos;
  for (const Term& t : terms_) {
    auto [it, fresh] = pos.try_emplace(t.var.index, out.terms_.size());
    if (fresh) {
      out.terms_.push_back(t);
    } else {
      out.terms_[it->second].coef += t.coef;
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

VarId LinModel::add_var(std::string name, VarKind kind, double lower, double upper) {
  if (!valid_name(name)) throw Error(ErrorCode::InvalidName, "'" + name + "'");
  if (index_.contains(name)) throw Error(ErrorCode::DuplicateName, name);
  if (kind == VarKind::Binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInf || upper == -kInf) {
    throw Error(ErrorCode::InvalidBounds, name);
  }
  const VarId id{num_vars()};
  index_.emplace(name, id.index);
  vars_.push_back({std::move(name), kind, lower, upper});
  return id;
}

void LinModel::check_expr(const LinExpr& expr) const {
  for (const Term& t : expr.terms()) {
    if (t.var.index < 0 || t.var.index >= num_vars()) {
      throw Error(ErrorCode::UnknownVariable, "variable handle " + std::to_string(t.var.index));
    }
    if (!std::isfinite(t.coef)) throw Error(ErrorCode::PreconditionViolated, "non-finite coefficient");
  }
}

ConstraintId LinModel::add_constraint(std::string name, const LinExpr& expr, Relation rel, double rhs) {
  check_expr(expr);
  if (!valid_name(name)) throw Error(ErrorCode::InvalidName, "'" + name + "'");
  if (!std::isfinite(rhs)) throw Error(ErrorCode::PreconditionViolated, "non-finite rhs in " + name);
  const ConstraintId id{num_constraints()};
  rows_.push_back({std::move(name), expr.normalized(), rel, rhs});
  return id;
}

void LinModel::set_objective(Sense sense, const LinExpr& expr, double offset) {
  check_expr(expr);
  objective_ = {sense, expr.normalized(), offset};
}

void LinModel::set_bounds(VarId v, double lower, double upper) {
  Variable& var = vars_.at(v.index);
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) throw Error(ErrorCode::InvalidBounds, var.name);
  var.lower = lower;
  var.upper = upper;
}

VarId LinModel::find_var(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw Error(ErrorCode::UnknownVariable, std::string(name));
  return VarId{it->second};
}

ModelStats LinModel::stats() const {
  ModelStats s;
  for (const Variable& v : vars_) {
    switch (v.kind) {
      case VarKind::Continuous: ++s.continuous; break;
      case VarKind::Integer: ++s.integer; break;
      case VarKind::Binary: ++s.binary; break;
    }
  }
  s.constraints = num_constraints();
  for (const Constraint& c : rows_) s.nonzeros += static_cast<int>(c.expr.terms().size());
  return s;
}

double LinModel::evaluate_objective(const std::vector<double>& values) const {
  double z = objective_.offset;
  for (const Term& t : objective_.expr.terms()) z += t.coef * values.at(t.var.index);
  return z;
}

double LinModel::row_activity(ConstraintId c, const std::vector<double>& values) const {
  double a = 0.0;
  for (const Term& t : rows_.at(c.index).expr.terms()) a += t.coef * values.at(t.var.index);
  return a;
}

double LinModel::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max({worst, vars_[j].lower - values.at(j), values.at(j) - vars_[j].upper});
  }
  for (int i = 0; i < num_constraints(); ++i) {
    const double a = row_activity(ConstraintId{i}, values);
    const Constraint& c = rows_[i];
    if (c.relation != Relation::GreaterEqual) worst = std::max(worst, a - c.rhs);
    if (c.relation != Relation::LessEqual) worst = std::max(worst, c.rhs - a);
  }
  return worst;
}

}  // namespace relulab
