#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "relulab/bench.hpp"
#include "relulab/commands.hpp"
#include "relulab/error.hpp"
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

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

KnapsackInstance one_class() {
  std::ifstream in(testutil::data_path("instance_n1.json"));
  return instance_from_json(in);
}

BenchRun fake_run(int n, Encoding e, MilpStatus s, double ms) {
  BenchRun r;
  r.n = n;
  r.encoding = e;
  r.status = s;
  r.solve_ms = ms;
  return r;
}

}  // namespace

TEST(Bench, AggregatesRecomputeFromRunsCsv) {
  BenchOptions opt;
  opt.n_list = {3, 5};
  opt.seeds = 3;
  opt.include_build = true;
  const BenchReport report = run_bench(testutil::fixture_net(), opt);
  ASSERT_EQ(report.runs.size(), 12u);

  const auto runs = parse_csv(runs_csv(report));
  ASSERT_EQ(runs[0].size(), 13u);
  EXPECT_EQ(runs[0][5], "solve_ms");
  EXPECT_EQ(runs[0].back(), "total_ms");
  // Recompute mean and population stddev per (n, encoding) from the text.
  std::map<std::string, std::vector<double>> ms;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    EXPECT_EQ(runs[i][3], "Optimal");
    ms[runs[i][0] + "," + runs[i][2]].push_back(std::stod(runs[i][5]));
  }
  const auto agg = parse_csv(aggregate_csv(report));
  ASSERT_EQ(agg.size(), 5u);
  EXPECT_EQ(agg[0][6], "stddev_solve_ms_population");
  for (std::size_t i = 1; i < agg.size(); ++i) {
    const auto& xs = ms.at(agg[i][0] + "," + agg[i][1]);
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / xs.size();
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    EXPECT_EQ(std::stoi(agg[i][2]), 3);
    EXPECT_EQ(std::stoi(agg[i][3]), 3);
    EXPECT_DOUBLE_EQ(std::stod(agg[i][5]), mean);
    EXPECT_NEAR(std::stod(agg[i][6]), std::sqrt(sq / xs.size()), 1e-9 * (1 + mean));
  }
}

TEST(Bench, EncodingsAgreePerSeed) {
  BenchOptions opt;
  opt.n_list = {6};
  opt.seeds = 4;
  const BenchReport report = run_bench(testutil::fixture_net(), opt);
  ASSERT_EQ(report.runs.size(), 8u);
  for (std::size_t i = 0; i < report.runs.size(); i += 2) {
    const BenchRun& a = report.runs[i];
    const BenchRun& b = report.runs[i + 1];
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.encoding, Encoding::ReluPlus);
    EXPECT_EQ(b.encoding, Encoding::Classic);
    EXPECT_NEAR(a.objective, b.objective, 1e-5);
    EXPECT_EQ(a.config_hash, b.config_hash);
  }
}

TEST(Bench, ZeroSeedsGivesEmptyTables) {
  BenchOptions opt;
  opt.n_list = {10};
  opt.seeds = 0;
  const BenchReport report = run_bench(testutil::fixture_net(), opt);
  EXPECT_TRUE(report.runs.empty());
  EXPECT_TRUE(report.aggregates.empty());
  EXPECT_EQ(parse_csv(runs_csv(report)).size(), 1u);
  EXPECT_EQ(parse_csv(aggregate_csv(report)).size(), 1u);
}

TEST(Bench, LimitRowsExcludedFromStatistics) {
  const std::vector<BenchRun> runs{
      fake_run(10, Encoding::Classic, MilpStatus::Optimal, 2.0),
      fake_run(10, Encoding::Classic, MilpStatus::LimitReached, 1000.0),
      fake_run(10, Encoding::Classic, MilpStatus::Optimal, 4.0),
      fake_run(10, Encoding::ReluPlus, MilpStatus::LimitReached, 7.0),
  };
  const auto agg = aggregate_runs(runs);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].encoding, Encoding::Classic);
  EXPECT_EQ(agg[0].runs, 3);
  EXPECT_EQ(agg[0].solved, 2);
  EXPECT_EQ(agg[0].limit_reached, 1);
  EXPECT_EQ(agg[0].mean_ms, 3.0);
  EXPECT_EQ(agg[0].stddev_ms, 1.0);
  EXPECT_EQ(agg[1].solved, 0);
  EXPECT_EQ(agg[1].limit_reached, 1);
}

TEST(Bench, LimitReachedCountedInReport) {
  BenchOptions opt;
  opt.n_list = {60};
  opt.seeds = 1;
  opt.encodings = {Encoding::Classic};
  opt.milp = bench_milp_config(0.05);
  std::ostringstream out;
  EXPECT_EQ(cmd_bench(testutil::fixture_net(), opt, {}, out), kExitSolverLimit);
  EXPECT_NE(out.str().find("LimitReached"), std::string::npos);
}

TEST(Bench, LargeNRequiresOptIn) {
  BenchOptions opt;
  opt.n_list = {kBenchDefaultMaxN + 1};
  opt.seeds = 1;
  EXPECT_EQ(code_of([&] { run_bench(testutil::fixture_net(), opt); }), ErrorCode::PreconditionViolated);
  opt.n_list = {0};
  EXPECT_EQ(code_of([&] { run_bench(testutil::fixture_net(), opt); }), ErrorCode::PreconditionViolated);
}

TEST(Bench, WorkersDoNotChangeResults) {
  BenchOptions opt;
  opt.n_list = {4, 5};
  opt.seeds = 3;
  const BenchReport one = run_bench(testutil::fixture_net(), opt);
  opt.workers = 3;
  const BenchReport three = run_bench(testutil::fixture_net(), opt);
  ASSERT_EQ(one.runs.size(), three.runs.size());
  for (std::size_t i = 0; i < one.runs.size(); ++i) {
    EXPECT_EQ(one.runs[i].n, three.runs[i].n);
    EXPECT_EQ(one.runs[i].seed, three.runs[i].seed);
    EXPECT_EQ(one.runs[i].encoding, three.runs[i].encoding);
    EXPECT_EQ(one.runs[i].objective, three.runs[i].objective);
    EXPECT_EQ(one.runs[i].nodes, three.runs[i].nodes);
    EXPECT_EQ(three.runs[i].workers, 3);
  }
}

TEST(Bench, WritesBothFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "relulab_bench_test";
  std::filesystem::create_directories(dir);
  BenchOptions opt;
  opt.n_list = {2};
  opt.seeds = 1;
  std::ostringstream out;
  ASSERT_EQ(cmd_bench(testutil::fixture_net(), opt, dir / "runs.csv", out), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "runs.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "runs_aggregate.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Cli, AggregatePath) {
  EXPECT_EQ(aggregate_path_for("out/bench.csv"), std::filesystem::path("out/bench_aggregate.csv"));
  EXPECT_EQ(aggregate_path_for("bench"), std::filesystem::path("bench_aggregate.csv"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::ParseError), kExitInputError);
  EXPECT_EQ(exit_code_for(ErrorCode::IoError), kExitInputError);
  EXPECT_EQ(exit_code_for(ErrorCode::NegativeWeightRejected), kExitInputError);
  EXPECT_EQ(exit_code_for(ErrorCode::BudgetExceeded), kExitSolverLimit);
  EXPECT_EQ(exit_code_for(ErrorCode::NumericalBreakdown), kExitSolverLimit);
}

TEST(Cli, GridParse) {
  const GridRange g = GridRange::parse("-2:5");
  EXPECT_EQ(g.lo, -2);
  EXPECT_EQ(g.hi, 5);
  EXPECT_TRUE(GridRange::parse("3:1").empty());
  for (const char* bad : {"", "3", "a:b", "1:2x", ":4"}) {
    EXPECT_EQ(code_of([&] { GridRange::parse(bad); }), ErrorCode::ParseError) << bad;
  }
}

TEST(Cli, VerifyFixturePasses) {
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(testutil::fixture_net(), {}, out), kExitOk);
  const std::string text = out.str();
  EXPECT_NE(text.find("verify: PASS"), std::string::npos);
  EXPECT_EQ(text.find("FAIL"), std::string::npos);
  VerifyOptions global;
  global.big_m = BigMPolicy::parse("global:1e5");
  std::ostringstream out2;
  EXPECT_EQ(cmd_verify(testutil::fixture_net(), global, out2), kExitOk);
}

TEST(Cli, VerifyNegativeWeight) {
  const ReluNet bad = testutil::fixture_net().with_weight(2, 0, 0, -0.5);
  VerifyOptions opt;
  opt.grid = GridRange::parse("0:3");
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(bad, opt, out), kExitVerifyFailed);
  const std::string text = out.str();
  EXPECT_NE(text.find("NegativeWeightRejected"), std::string::npos);
  // The classic checks still run and hold for any sign pattern.
  int ok = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("x=", 0) == 0) ok += line.size() >= 3 && line.substr(line.size() - 3) == " ok";
  }
  EXPECT_EQ(ok, 4);
  EXPECT_NE(text.find("verify: FAIL"), std::string::npos);
}

TEST(Cli, VerifyEmptyGridIsVacuous) {
  VerifyOptions opt;
  opt.grid = GridRange::parse("5:4");
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(testutil::fixture_net(), opt, out), kExitOk);
  EXPECT_NE(out.str().find("vacuous"), std::string::npos);
}

TEST(Cli, EncodeCounts) {
  const ReluNet net = testutil::fixture_net();
  std::ostringstream lp, info;
  EXPECT_EQ(cmd_encode(one_class(), net, Encoding::ReluPlus, {}, lp, info), kExitOk);
  EXPECT_NE(info.str().find("constraints: 16 (rows 15, bound-realized 1)"), std::string::npos) << info.str();
  EXPECT_NE(lp.str().find("Subject To"), std::string::npos);
  const EncodingCounts c = count_encoding(build_model(one_class(), net, Encoding::Classic));
  EXPECT_EQ(c.rows, 41);
  EXPECT_EQ(c.binary, 13);
  EXPECT_EQ(c.constraints(), 42);
  EXPECT_EQ(c.variables, c.continuous + c.integer + c.binary);
}

TEST(Cli, SolveSingleClass) {
  const ReluNet net = testutil::fixture_net();
  const auto& f = testutil::fixture_table();
  for (Encoding e : {Encoding::ReluPlus, Encoding::Classic}) {
    std::ostringstream out;
    ASSERT_EQ(cmd_solve(one_class(), net, e, {}, kInf, out), kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["status"], "Optimal");
    EXPECT_EQ(j["X"], nlohmann::json::array({2}));
    EXPECT_NEAR(j["objective"].get<double>(), 200 - 10 * (f(2) - 2), 1e-6);
    EXPECT_NEAR(j["theta"][0].get<double>(), f(2), 1e-6);
    EXPECT_TRUE(j["stats"].contains("bnb_nodes"));
  }
}

TEST(Cli, SolveInfeasible) {
  std::ifstream in(testutil::data_path("instance_infeasible.json"));
  const KnapsackInstance inst = instance_from_json(in);
  std::ostringstream out;
  EXPECT_EQ(cmd_solve(inst, testutil::fixture_net(), Encoding::ReluPlus, {}, kInf, out), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["status"], "Infeasible");
  EXPECT_TRUE(j["objective"].is_null());
}
