#include "relulab/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "relulab/error.hpp"
#include "relulab/milp.hpp"
#include "relulab/simplex.hpp"
#include "relulab/text_format.hpp"

namespace relulab {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::BudgetExceeded:
      return kExitSolverLimit;
    default:
      return kExitInputError;
  }
}

GridRange GridRange::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "grid must look like lo:hi, got '" + std::string(text) + "'");
  }
  GridRange g;
  try {
    std::size_t used = 0;
    const std::string lo(text.substr(0, colon));
    const std::string hi(text.substr(colon + 1));
    g.lo = std::stoi(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    g.hi = std::stoi(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "grid must look like lo:hi, got '" + std::string(text) + "'");
  }
  return g;
}

namespace {

struct PointModel {
  LinModel model;
  EmbeddingHandle handle;
};

PointModel relu_plus_point(const ReluNet& net, double x, Sense sense) {
  PointModel pm;
  const VarId in = pm.model.add_var("x", VarKind::Continuous, x, x);
  pm.handle = encode_relu_plus(pm.model, net, in, "v");
  pm.model.set_objective(sense, LinExpr{{pm.handle.output, 1.0}});
  return pm;
}

PointModel classic_point(const ReluNet& net, double x, const NodeBounds& bounds, const BigMPolicy& policy,
                         Sense sense) {
  PointModel pm;
  const VarId in = pm.model.add_var("x", VarKind::Continuous, x, x);
  pm.handle = encode_classic(pm.model, net, in, "v", bounds, policy);
  pm.model.set_objective(sense, LinExpr{{pm.handle.output, 1.0}});
  return pm;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

}  // namespace

int cmd_verify(const ReluNet& net, const VerifyOptions& options, std::ostream& out) {
  if (options.grid.empty()) {
    out << "warning: empty grid " << options.grid.lo << ":" << options.grid.hi << ", nothing to verify\n";
    out << "verify: PASS (vacuous)\n";
    return kExitOk;
  }

  int failures = 0;
  const CompatibilityReport compat = validate_relu_plus_compatible(net);
  const bool relu_plus = compat.compatible;
  if (!relu_plus) {
    ++failures;
    out << "reluplus: " << to_string(ErrorCode::NegativeWeightRejected) << ", " << compat.violations.size()
        << " negative weight(s)";
    for (const WeightViolation& v : compat.violations) {
      out << " [layer " << v.layer << " " << v.from << "->" << v.to << " = " << format_number(v.value) << "]";
    }
    out << "; skipping ReLU+ checks\n";
  }

  const NodeBounds bounds = propagate_bounds(net, {static_cast<double>(options.grid.lo),
                                                   static_cast<double>(options.grid.hi)});
  MilpConfig milp;
  milp.gap_rel = 0.0;
  milp.gap_abs = 1e-9;

  for (int xi = options.grid.lo; xi <= options.grid.hi; ++xi) {
    const double x = xi;
    const double expect = net.forward(x);
    std::string line = "x=" + std::to_string(xi) + " forward=" + fmt(expect);
    bool ok = true;
    auto check = [&](const char* label, bool good, const std::string& shown) {
      line += std::string(" ") + label + "=" + shown + (good ? "" : "(!)");
      ok = ok && good;
    };
    try {
      if (relu_plus) {
        const PointModel lo = relu_plus_point(net, x, Sense::Minimize);
        const SimplexResult r = solve_lp(lo.model, false);
        if (r.status == LpStatus::Optimal) {
          check("reluplus_min", std::abs(r.objective - expect) <= options.tol, fmt(r.objective));
        } else {
          check("reluplus_min", false, std::string(to_string(r.status)));
        }
        const PointModel hi = relu_plus_point(net, x, Sense::Maximize);
        const SimplexResult u = solve_lp(hi.model, false);
        check("reluplus_max", u.status == LpStatus::Unbounded, std::string(to_string(u.status)));
      }
      for (Sense sense : {Sense::Maximize, Sense::Minimize}) {
        const PointModel pm = classic_point(net, x, bounds, options.big_m, sense);
        const MilpResult r = solve_milp(pm.model, milp);
        const char* label = sense == Sense::Maximize ? "classic_max" : "classic_min";
        if (r.status == MilpStatus::Optimal) {
          check(label, std::abs(r.objective - expect) <= options.tol, fmt(r.objective));
        } else {
          check(label, false, std::string(to_string(r.status)));
        }
      }
    } catch (const Error& e) {
      line += std::string(" error=") + e.what();
      ok = false;
    }
    if (!ok) ++failures;
    out << line << (ok ? " ok" : " FAIL") << "\n";
  }

  out << "verify: " << (failures == 0 ? "PASS" : "FAIL") << " (" << failures << " failing check group(s))\n";
  return failures == 0 ? kExitOk : kExitVerifyFailed;
}

EncodingCounts count_encoding(const KnapsackModel& km) {
  const ModelStats st = km.model.stats();
  EncodingCounts c;
  c.variables = st.variables();
  c.continuous = st.continuous;
  c.integer = st.integer;
  c.binary = st.binary;
  c.rows = st.constraints;
  c.bound_constraints = static_cast<int>(km.items.size());
  return c;
}

int cmd_encode(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding, const BigMPolicy& big_m,
               std::ostream& lp_out, std::ostream& info) {
  const KnapsackModel km = build_model(inst, net, encoding, big_m);
  lp_out << export_lp(km.model);
  const EncodingCounts c = count_encoding(km);
  info << "encoding: " << to_string(encoding) << "\n";
  info << "variables: " << c.variables << " (integer " << c.integer << ", binary " << c.binary << ", continuous "
       << c.continuous << ")\n";
  info << "constraints: " << c.constraints() << " (rows " << c.rows << ", bound-realized " << c.bound_constraints
       << ")\n";
  return kExitOk;
}

int cmd_solve(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding, const BigMPolicy& big_m,
              double time_limit_s, std::ostream& out) {
  const KnapsackModel km = build_model(inst, net, encoding, big_m);
  const MilpConfig cfg = bench_milp_config(time_limit_s);
  const auto t0 = std::chrono::steady_clock::now();
  const MilpResult r = solve_milp(km.model, cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(r.status));
  j["encoding"] = std::string(to_string(encoding));
  j["n"] = inst.n;
  j["seed"] = inst.seed;
  if (r.has_incumbent) {
    std::vector<long long> xs;
    std::vector<double> thetas;
    for (VarId v : km.items) xs.push_back(std::llround(r.values[v.index]));
    for (VarId v : km.thetas) thetas.push_back(r.values[v.index]);
    j["objective"] = r.objective;
    j["X"] = xs;
    j["theta"] = thetas;
  } else {
    j["objective"] = nullptr;
    j["X"] = nlohmann::json::array();
    j["theta"] = nlohmann::json::array();
  }
  nlohmann::ordered_json stats;
  if (r.has_incumbent || r.status == MilpStatus::LimitReached) {
    stats["bound"] = std::isfinite(r.bound) ? nlohmann::json(r.bound) : nlohmann::json(nullptr);
    stats["gap"] = std::isfinite(r.gap) ? nlohmann::json(r.gap) : nlohmann::json(nullptr);
  }
  stats["bnb_nodes"] = r.nodes;
  stats["simplex_iterations"] = r.simplex_iterations;
  stats["cuts"] = r.cuts;
  stats["solve_ms"] = ms;
  stats["config_hash"] = cfg.hash();
  j["stats"] = stats;
  out << j.dump(2) << "\n";
  return r.status == MilpStatus::LimitReached ? kExitSolverLimit : kExitOk;
}

std::filesystem::path aggregate_path_for(const std::filesystem::path& runs_path) {
  std::filesystem::path p = runs_path;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_filename(p.stem().string() + "_aggregate" + ext);
  return p;
}

int cmd_bench(const ReluNet& net, const BenchOptions& options, const std::filesystem::path& out_path,
              std::ostream& out) {
  const BenchReport report = run_bench(net, options);
  if (out_path.empty()) {
    out << runs_csv(report) << "\n" << aggregate_csv(report);
  } else {
    const std::filesystem::path agg = aggregate_path_for(out_path);
    std::ofstream runs_file(out_path);
    std::ofstream agg_file(agg);
    if (!runs_file || !agg_file) throw Error(ErrorCode::IoError, "cannot write " + out_path.string());
    runs_file << runs_csv(report);
    agg_file << aggregate_csv(report);
    out << "wrote " << report.runs.size() << " runs to " << out_path.string() << " and "
        << report.aggregates.size() << " aggregate rows to " << agg.string() << "\n";
  }
  if (report.limit_reached() > 0) {
    out << "warning: " << report.limit_reached() << " run(s) hit the solver limit and are excluded from the means\n";
    return kExitSolverLimit;
  }
  return kExitOk;
}

}  // namespace relulab
