#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "relulab/error.hpp"
#include "relulab/knapsack.hpp"
#include "relulab/lin_model.hpp"
#include "test_util.hpp"

using namespace relulab;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no relulab::Error thrown";
  return ErrorCode::PreconditionViolated;
}

// Lines of `text` matching `pattern` in full.
int count_lines(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += std::regex_match(line, re);
  return n;
}

}  // namespace

TEST(LinModel, AddVarHandles) {
  LinModel m;
  const VarId x = m.add_var("X_0", VarKind::Integer, 0, 7);
  EXPECT_EQ(x.index, 0);
  const VarId t = m.add_var("theta_0", VarKind::Continuous, -kInf, kInf);
  EXPECT_EQ(t.index, 1);
  EXPECT_EQ(m.var(t).lower, -kInf);
  EXPECT_EQ(m.var(t).upper, kInf);
  EXPECT_EQ(m.find_var("theta_0"), t);
}

TEST(LinModel, AddVarErrors) {
  LinModel m;
  m.add_var("X_0", VarKind::Integer, 0, 7);
  EXPECT_EQ(code_of([&] { m.add_var("X_0", VarKind::Integer, 0, 7); }), ErrorCode::DuplicateName);
  EXPECT_EQ(code_of([&] { m.add_var("z", VarKind::Continuous, 2, 1); }), ErrorCode::InvalidBounds);
  EXPECT_EQ(code_of([&] { m.add_var("bad name", VarKind::Continuous, 0, 1); }), ErrorCode::InvalidName);
  EXPECT_EQ(code_of([&] { m.add_var("", VarKind::Continuous, 0, 1); }), ErrorCode::InvalidName);
  EXPECT_EQ(m.num_vars(), 1);
}

TEST(LinModel, BinaryIsUnitInteger) {
  LinModel m;
  const VarId y = m.add_var("y", VarKind::Binary, -kInf, kInf);
  EXPECT_EQ(m.var(y).lower, 0.0);
  EXPECT_EQ(m.var(y).upper, 1.0);
  EXPECT_TRUE(m.var(y).is_integer());
}

TEST(LinModel, ConstraintFromFixtureRow) {
  LinModel m;
  const VarId x = m.add_var("x", VarKind::Continuous, 0, 10);
  const VarId s = m.add_var("sigma", VarKind::Continuous, 0, kInf);
  const ConstraintId c =
      m.add_constraint("lb", LinExpr{{s, 1.0}, {x, -0.760635}}, Relation::GreaterEqual, -1.45461);
  EXPECT_EQ(c.index, 0);
  EXPECT_EQ(m.constraint(c).expr.terms().size(), 2u);
  EXPECT_NEAR(m.row_activity(c, {10.0, 6.15174}), 6.15174 - 7.60635, 1e-12);
}

TEST(LinModel, EmptyExpressionAccepted) {
  LinModel m;
  m.add_var("x", VarKind::Continuous, 0, 1);
  const ConstraintId c = m.add_constraint("empty", LinExpr{}, Relation::LessEqual, 5.0);
  EXPECT_TRUE(m.constraint(c).expr.empty());
  EXPECT_EQ(m.max_violation({0.5}), 0.0);
}

TEST(LinModel, UnknownVariable) {
  LinModel m;
  m.add_var("x", VarKind::Continuous, 0, 1);
  EXPECT_EQ(code_of([&] { m.add_constraint("c", LinExpr{{VarId{3}, 1.0}}, Relation::LessEqual, 1.0); }),
            ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of([&] { m.find_var("nope"); }), ErrorCode::UnknownVariable);
}

TEST(LinModel, NormalizationMergesAndDropsZeros) {
  LinModel m;
  const VarId x = m.add_var("x", VarKind::Continuous, 0, 1);
  const VarId y = m.add_var("y", VarKind::Continuous, 0, 1);
  const ConstraintId c =
      m.add_constraint("c", LinExpr{{y, 2.0}, {x, 1.0}, {y, -2.0}, {x, 0.5}}, Relation::LessEqual, 1.0);
  const auto& terms = m.constraint(c).expr.terms();
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0].var, x);
  EXPECT_EQ(terms[0].coef, 1.5);
}

TEST(LinModel, StatsAndEvaluation) {
  LinModel m;
  const VarId a = m.add_var("a", VarKind::Continuous, 0, 1);
  const VarId b = m.add_var("b", VarKind::Integer, 0, 4);
  const VarId c = m.add_var("c", VarKind::Binary, 0, 1);
  m.add_constraint("r1", LinExpr{{a, 1}, {b, 1}}, Relation::LessEqual, 3);
  m.add_constraint("r2", LinExpr{{c, 2}}, Relation::Equal, 0);
  m.set_objective(Sense::Maximize, LinExpr{{a, 1}, {b, 2}, {c, 3}}, 10.0);
  const ModelStats st = m.stats();
  EXPECT_EQ(st.continuous, 1);
  EXPECT_EQ(st.integer, 1);
  EXPECT_EQ(st.binary, 1);
  EXPECT_EQ(st.variables(), 3);
  EXPECT_EQ(st.constraints, 2);
  EXPECT_EQ(st.nonzeros, 3);
  EXPECT_EQ(m.evaluate_objective({0.5, 2, 1}), 10.0 + 0.5 + 4 + 3);
  EXPECT_EQ(m.max_violation({1, 2, 0}), 0.0);
  EXPECT_EQ(m.max_violation({1, 3, 0}), 1.0);
  EXPECT_EQ(m.max_violation({0, 0, 1}), 2.0);
}

TEST(LpExport, SmokeOneVariable) {
  LinModel m;
  const VarId x = m.add_var("x", VarKind::Continuous, 0, 4);
  m.set_objective(Sense::Maximize, LinExpr{{x, 1}});
  const std::string lp = export_lp(m);
  EXPECT_NE(lp.find("Maximize"), std::string::npos);
  EXPECT_NE(lp.find("Bounds"), std::string::npos);
  EXPECT_NE(lp.find("0 <= x <= 4"), std::string::npos);
  EXPECT_NE(lp.find("End"), std::string::npos);
}

TEST(LpExport, InfiniteBoundsAndIntegrality) {
  LinModel m;
  const VarId t = m.add_var("t", VarKind::Continuous, -kInf, kInf);
  const VarId n = m.add_var("n", VarKind::Integer, -2, 5);
  const VarId y = m.add_var("y", VarKind::Binary, 0, 1);
  m.add_constraint("c", LinExpr{{t, 1}, {n, -1}, {y, 1}}, Relation::Equal, 0);
  m.set_objective(Sense::Minimize, LinExpr{{t, 1}}, 3.5);
  const std::string lp = export_lp(m);
  EXPECT_NE(lp.find("Minimize"), std::string::npos);
  EXPECT_NE(lp.find("t free"), std::string::npos);
  EXPECT_NE(lp.find("-2 <= n <= 5"), std::string::npos);
  EXPECT_NE(lp.find("General\n n"), std::string::npos);
  EXPECT_NE(lp.find("Binary\n y"), std::string::npos);
  EXPECT_EQ(lp.find("inf"), std::string::npos);
  EXPECT_EQ(lp.find("1e+"), std::string::npos);
}

TEST(LpExport, DeterministicAndOrdered) {
  LinModel m;
  const VarId x = m.add_var("x", VarKind::Continuous, 0, 1);
  for (int i = 0; i < 5; ++i) m.add_constraint("r" + std::to_string(i), LinExpr{{x, i + 1.0}}, Relation::LessEqual, i);
  const std::string a = export_lp(m);
  EXPECT_EQ(a, export_lp(m));
  std::size_t last = 0;
  for (int i = 0; i < 5; ++i) {
    const std::size_t at = a.find(" r" + std::to_string(i) + ":");
    ASSERT_NE(at, std::string::npos);
    EXPECT_GT(at, last);
    last = at;
  }
}

TEST(LpExport, KnapsackReluPlusCounts) {
  KnapsackInstance inst;
  inst.n = 1;
  inst.v = {100};
  inst.s = {10};
  inst.p = {10};
  inst.m = {3};
  inst.capacity = 25;
  const ReluNet net = testutil::fixture_net();
  const KnapsackModel rp = build_model(inst, net, Encoding::ReluPlus);
  const std::string lp = export_lp(rp.model);
  const auto subject = lp.substr(lp.find("Subject To"), lp.find("Bounds") - lp.find("Subject To"));
  EXPECT_EQ(count_lines(subject, R"( [A-Za-z_0-9]+: .*)"), 15);  // capacity + 14 embedding rows
  EXPECT_NE(lp.find("0 <= X_0 <= 3"), std::string::npos);        // copy limit as a bound
  EXPECT_NE(lp.find("General\n X_0"), std::string::npos);
  EXPECT_EQ(lp.find("Binary"), std::string::npos);

  const KnapsackModel cl = build_model(inst, net, Encoding::Classic);
  const std::string lpc = export_lp(cl.model);
  std::istringstream bin(lpc.substr(lpc.find("Binary\n") + 7));
  int binaries = 0;
  for (std::string tok; bin >> tok && tok != "End";) binaries += tok.rfind("y_", 0) == 0;
  EXPECT_EQ(binaries, 13);
}
