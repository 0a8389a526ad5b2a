#include "relulab/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include "relulab/error.hpp"
#include "relulab/text_format.hpp"
#include "simplex_engine.hpp"

namespace relulab {

std::string_view to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Unbounded: return "Unbounded";
    case MilpStatus::LimitReached: return "LimitReached";
  }
  return "Unknown";
}

std::string MilpConfig::hash() const {
  const std::string text = "int_tol=" + format_number(int_tol) + ";gap_abs=" + format_number(gap_abs) +
                           ";gap_rel=" + format_number(gap_rel) + ";node_limit=" + std::to_string(node_limit) +
                           ";time_limit=" + format_number(time_limit_s) +
                           ";floor_first=" + std::to_string(floor_first) +
                           ";cut_rounds=" + std::to_string(root_cut_rounds) +
                           ";cuts_per_round=" + std::to_string(max_cuts_per_round) +
                           ";feas=" + format_number(lp.feasibility_tol) + ";opt=" + format_number(lp.optimality_tol) +
                           ";piv=" + format_number(lp.pivot_tol) + ";refactor=" + std::to_string(lp.refactor_interval) +
                           ";bland=" + std::to_string(lp.bland_factor);
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using detail::ColumnKind;
using detail::EngineStatus;
using detail::SimplexEngine;
using detail::VarState;

struct Cut {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
  double efficacy = 0.0;
};

double frac_part(double v) { return v - std::floor(v); }

// Gomory mixed-integer cut from the tableau row of a fractional basic
// integer variable, expressed over the structural columns as coeffs.x >= rhs.
std::optional<Cut> gomory_cut(SimplexEngine& eng, int pos, const std::vector<char>& is_int) {
  const detail::TableauRow row = eng.tableau_row(pos);
  const double f0 = frac_part(row.value);
  if (f0 < 0.005 || f0 > 0.995) return std::nullopt;

  const int n = eng.num_structural();
  std::vector<double> dense(n, 0.0);
  double rhs = 1.0;
  for (const auto& [k, alpha] : row.entries) {
    if (eng.lower(k) == eng.upper(k)) continue;
    const VarState s = eng.state(k);
    if (s == VarState::FreeZero) return std::nullopt;
    if (std::abs(alpha) > 1e7) return std::nullopt;
    const double a = s == VarState::AtLower ? alpha : -alpha;
    double pi = 0.0;
    if (eng.kind(k) == ColumnKind::Structural && is_int[k]) {
      const double f = frac_part(a);
      pi = f <= f0 ? f / f0 : (1.0 - f) / (1.0 - f0);
    } else {
      pi = a >= 0 ? a / f0 : -a / (1.0 - f0);
    }
    if (pi == 0.0) continue;
    // x' = x - lo (at lower) or up - x (at upper).
    const double sign = s == VarState::AtLower ? 1.0 : -1.0;
    rhs += s == VarState::AtLower ? pi * eng.lower(k) : -pi * eng.upper(k);
    if (eng.kind(k) == ColumnKind::Structural) {
      dense[k] += sign * pi;
    } else if (eng.kind(k) == ColumnKind::Logical) {
      for (const auto& [j, c] : eng.row(eng.logical_row(k))) dense[j] += sign * pi * c;
    } else {
      return std::nullopt;
    }
  }

  double max_abs = 0.0;
  for (double c : dense) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0) return std::nullopt;

  Cut cut;
  double min_abs = kInf;
  for (int j = 0; j < n; ++j) {
    const double c = dense[j];
    if (c == 0.0) continue;
    if (std::abs(c) < 1e-11 * max_abs) {
      // Drop the term, relaxing the rhs by its largest possible contribution.
      const double worst = std::max(c * eng.lower(j), c * eng.upper(j));
      if (!std::isfinite(worst)) return std::nullopt;
      rhs -= worst;
      continue;
    }
    min_abs = std::min(min_abs, std::abs(c));
    cut.coeffs.emplace_back(j, c);
  }
  if (cut.coeffs.empty() || max_abs / min_abs > 1e8) return std::nullopt;
  // Scale to unit max coefficient so the absolute LP tolerances mean the
  // same thing for every cut.
  for (auto& term : cut.coeffs) term.second /= max_abs;
  rhs /= max_abs;
  rhs -= 1e-9 * std::max(1.0, std::abs(rhs));

  double lhs = 0.0;
  double norm2 = 0.0;
  for (const auto& [j, c] : cut.coeffs) {
    lhs += c * eng.value(j);
    norm2 += c * c;
  }
  cut.rhs = rhs;
  cut.efficacy = (rhs - lhs) / std::sqrt(norm2);
  if (cut.efficacy < 1e-6) return std::nullopt;
  return cut;
}

// Re-solves the LP with every integer fixed at its rounded value, so the
// continuous part is consistent with exact integers. Without this a big-M
// row lets int_tol * M leak into the continuous variables. Keeps the
// unpolished point if the fixed LP is not optimal.
void polish_incumbent(const LinModel& model, const std::vector<int>& ints, const SimplexOptions& lp,
                      std::vector<double>& values) {
  LinModel fixed = model;
  for (int j : ints) fixed.set_bounds(VarId{j}, values[j], values[j]);
  const SimplexResult r = solve_lp(fixed, true, lp);
  if (r.status != LpStatus::Optimal) return;
  values = r.values;
  for (int j : ints) values[j] = std::round(values[j]);
}

struct Node {
  std::vector<double> lo;
  std::vector<double> up;
  double bound = -kInf;  // minimization-form bound inherited from the parent
};

}  // namespace

MilpResult solve_milp(const LinModel& model, const MilpConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const double sense = model.objective().sense == Sense::Maximize ? -1.0 : 1.0;
  const double offset = model.objective().offset;
  auto to_model = [&](double z_min) { return sense * z_min + offset; };

  MilpResult res;
  SimplexEngine eng(model, config.lp);
  const int n = model.num_vars();
  std::vector<int> ints;
  std::vector<char> is_int(n, 0);
  Node root;
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    if (!v.is_integer()) continue;
    const double lo = std::ceil(v.lower - config.int_tol);
    const double up = std::floor(v.upper + config.int_tol);
    if (lo > up) return res;  // Infeasible
    ints.push_back(j);
    is_int[j] = 1;
    root.lo.push_back(lo);
    root.up.push_back(up);
    eng.set_bounds(j, lo, up);
  }

  auto finish = [&](MilpResult& r) {
    r.simplex_iterations = eng.iterations();
    return r;
  };

  EngineStatus st = eng.solve();
  ++res.nodes;
  if (st == EngineStatus::Infeasible) return finish(res);
  if (st == EngineStatus::Unbounded) {
    res.status = MilpStatus::Unbounded;
    return finish(res);
  }

  // Root cutting loop.
  double last = eng.objective();
  int stalled = 0;
  for (int round = 0; round < config.root_cut_rounds && !ints.empty(); ++round) {
    std::vector<Cut> cuts;
    for (int j : ints) {
      const int pos = eng.basis_position(j);
      if (pos < 0) continue;
      const double f = frac_part(eng.value(j));
      if (std::min(f, 1.0 - f) <= config.int_tol) continue;
      if (auto cut = gomory_cut(eng, pos, is_int)) cuts.push_back(std::move(*cut));
    }
    if (cuts.empty()) break;
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.efficacy > b.efficacy; });
    if (static_cast<int>(cuts.size()) > config.max_cuts_per_round) cuts.resize(config.max_cuts_per_round);
    for (const Cut& c : cuts) eng.add_row(c.coeffs, c.rhs, kInf);
    res.cuts += static_cast<int>(cuts.size());
    st = eng.reoptimize();
    if (st == EngineStatus::Infeasible) return finish(res);
    if (st != EngineStatus::Optimal) break;
    const double z = eng.objective();
    if (z - last < 1e-4 * std::max(1.0, std::abs(z))) {
      if (++stalled >= 3) break;
    } else {
      stalled = 0;
    }
    last = z;
  }
  root.bound = eng.objective();
  res.root_bound = to_model(root.bound);

  double incumbent = kInf;  // minimization form
  double pruned_bound = kInf;
  auto gap_of = [&](double inc) { return std::max(config.gap_abs, config.gap_rel * std::abs(to_model(inc))); };

  std::vector<Node> stack;
  stack.push_back(std::move(root));
  bool limit_hit = false;
  bool first = true;
  while (!stack.empty()) {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (res.nodes >= config.node_limit || elapsed > config.time_limit_s) {
      limit_hit = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (std::isfinite(incumbent) && node.bound >= incumbent - gap_of(incumbent)) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    for (std::size_t k = 0; k < ints.size(); ++k) eng.set_bounds(ints[k], node.lo[k], node.up[k]);
    const double cutoff = std::isfinite(incumbent) ? incumbent - gap_of(incumbent) : kInf;
    if (!first) {
      st = eng.reoptimize(cutoff);
      ++res.nodes;
    }
    first = false;
    if (st == EngineStatus::Infeasible) continue;
    if (st == EngineStatus::Cutoff) {
      pruned_bound = std::min(pruned_bound, cutoff);
      continue;
    }
    if (st == EngineStatus::Unbounded) {
      res.status = MilpStatus::Unbounded;
      return finish(res);
    }
    const double z = eng.objective();
    if (std::isfinite(incumbent) && z >= incumbent - gap_of(incumbent)) {
      pruned_bound = std::min(pruned_bound, z);
      continue;
    }

    int branch = -1;
    double best_dist = config.int_tol;
    for (std::size_t k = 0; k < ints.size(); ++k) {
      const double v = eng.value(ints[k]);
      const double f = frac_part(v);
      const double dist = std::min(f, 1.0 - f);
      if (dist > best_dist) {
        best_dist = dist;
        branch = static_cast<int>(k);
      }
    }
    if (branch < 0) {
      std::vector<double> values = eng.structural_values();
      for (int j : ints) values[j] = std::round(values[j]);
      polish_incumbent(model, ints, config.lp, values);
      const double obj = model.evaluate_objective(values);
      const double z_inc = sense * (obj - offset);
      if (z_inc < incumbent) {
        incumbent = z_inc;
        res.values = std::move(values);
        res.objective = obj;
        res.has_incumbent = true;
      }
      continue;
    }

    const double v = eng.value(ints[branch]);
    Node down = node;
    down.up[branch] = std::floor(v);
    down.bound = z;
    Node up = std::move(node);
    up.lo[branch] = std::ceil(v);
    up.bound = z;
    if (config.floor_first) {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    } else {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    }
  }

  double open_bound = kInf;
  for (const Node& nd : stack) open_bound = std::min(open_bound, nd.bound);
  const double proven = std::min({incumbent, pruned_bound, open_bound});
  if (limit_hit) {
    res.status = MilpStatus::LimitReached;
  } else {
    res.status = res.has_incumbent ? MilpStatus::Optimal : MilpStatus::Infeasible;
  }
  if (res.has_incumbent || limit_hit) {
    res.bound = std::isfinite(proven) ? to_model(proven) : sense * -kInf;
    res.gap = res.has_incumbent ? std::abs(res.bound - res.objective) : kInf;
  }
  return finish(res);
}

}  // namespace relulab
