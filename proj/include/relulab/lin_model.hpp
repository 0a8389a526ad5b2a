#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relulab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Integer, Binary };
enum class Relation { LessEqual, GreaterEqual, Equal };
enum class Sense { Maximize, Minimize };

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct ConstraintId {
  int index = -1;
  friend bool operator==(ConstraintId, ConstraintId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

// Sparse linear expression. Repeated variables are merged and exact zeros
// dropped when the expression is attached to a model.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(std::initializer_list<Term> terms) : terms_(terms) {}

  LinExpr& add(VarId v, double coef) {
    terms_.push_back({v, coef});
    return *this;
  }
  LinExpr& scale(double factor) {
    for (Term& t : terms_) t.coef *= factor;
    return *this;
  }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Merge duplicates (first-appearance order) and drop exact zeros.
  LinExpr normalized() const;

 private:
  std::vector<Term> terms_;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;

  bool is_integer() const { return kind != VarKind::Continuous; }
};

struct Constraint {
  std::string name;
  LinExpr expr;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Objective {
  Sense sense = Sense::Maximize;
  LinExpr expr;
  double offset = 0.0;
};

struct ModelStats {
  int continuous = 0;
  int integer = 0;  // general integers, excluding binaries
  int binary = 0;
  int constraints = 0;
  int nonzeros = 0;

  int variables() const { return continuous + integer + binary; }
};

/// Solver-agnostic linear model: bounded variables, linear rows and a linear
/// objective. Built single-threaded; a finished model may be read concurrently.
class LinModel {
 public:
  VarId add_var(std::string name, VarKind kind, double lower, double upper);
  ConstraintId add_constraint(std::string name, const LinExpr& expr, Relation rel, double rhs);
  void set_objective(Sense sense, const LinExpr& expr, double offset = 0.0);

  // Tightens or relaxes bounds of an existing variable.
  void set_bounds(VarId v, double lower, double upper);

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const Variable& var(VarId v) const { return vars_.at(v.index); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Constraint& constraint(ConstraintId c) const { return rows_.at(c.index); }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Objective& objective() const { return objective_; }
  VarId find_var(std::string_view name) const;

  ModelStats stats() const;

  // Objective value (including offset) at a full primal point.
  double evaluate_objective(const std::vector<double>& values) const;
  double row_activity(ConstraintId c, const std::vector<double>& values) const;
  // Largest bound or row violation of the point; 0 when feasible.
  double max_violation(const std::vector<double>& values) const;

 private:
  void check_expr(const LinExpr& expr) const;

  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Objective objective_;
  std::unordered_map<std::string, int> index_;
};

/// Deterministic LP-format text (objective, rows, bounds, integrality).
std::string export_lp(const LinModel& model);

}  // namespace relulab
