#include "relulab/knapsack.hpp"

#include <istream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "relulab/error.hpp"

namespace relulab {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return lo + static_cast<int>(r % range);
  }
}

KnapsackInstance generate_instance(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n must be >= 1");
  using R = KnapsackRanges;
  KnapsackInstance inst;
  inst.n = n;
  inst.seed = seed;
  std::mt19937_64 rng(seed);
  long long demand = 0;
  for (int c = 0; c < n; ++c) {
    inst.v.push_back(uniform_int(rng, R::v_lo, R::v_hi));
    inst.s.push_back(uniform_int(rng, R::s_lo, R::s_hi));
    inst.p.push_back(uniform_int(rng, R::p_lo, R::p_hi));
    inst.m.push_back(uniform_int(rng, R::m_lo, R::m_hi));
    demand += static_cast<long long>(inst.s.back()) * inst.m.back();
  }
  inst.capacity = demand / 2;
  return inst;
}

std::string instance_to_json(const KnapsackInstance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  j["S"] = inst.capacity;
  j["seed"] = inst.seed;
  j["rng"] = inst.rng;
  j["capacity_rule"] = inst.capacity_rule;
  j["v"] = inst.v;
  j["s"] = inst.s;
  j["p"] = inst.p;
  j["m"] = inst.m;
  return j.dump(2) + "\n";
}

KnapsackInstance instance_from_json(std::istream& in) {
  KnapsackInstance inst;
  try {
    nlohmann::json j;
    in >> j;
    inst.n = j.at("n").get<int>();
    inst.capacity = j.at("S").get<long long>();
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.rng = j.value("rng", std::string("unspecified"));
    inst.capacity_rule = j.value("capacity_rule", std::string("explicit"));
    inst.v = j.at("v").get<std::vector<int>>();
    inst.s = j.at("s").get<std::vector<int>>();
    inst.p = j.at("p").get<std::vector<int>>();
    inst.m = j.at("m").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("instance: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(inst.n);
  if (inst.n < 1 || inst.v.size() != n || inst.s.size() != n || inst.p.size() != n || inst.m.size() != n) {
    throw Error(ErrorCode::ParseError, "instance: n must be >= 1 and match the lengths of v, s, p, m");
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (inst.m[c] < 0 || inst.s[c] < 0) {
      throw Error(ErrorCode::ParseError, "instance: sizes and copy limits must be non-negative");
    }
  }
  return inst;
}

KnapsackModel build_model(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding,
                          const BigMPolicy& policy) {
  if (inst.n < 1) throw Error(ErrorCode::PreconditionViolated, "knapsack needs at least one class");
  KnapsackModel km;
  LinModel& model = km.model;
  for (int c = 0; c < inst.n; ++c) {
    km.items.push_back(model.add_var("X_" + std::to_string(c), VarKind::Integer, 0.0, inst.m[c]));
  }
  LinExpr cap;
  for (int c = 0; c < inst.n; ++c) cap.add(km.items[c], inst.s[c]);
  km.capacity = model.add_constraint("capacity", cap, Relation::LessEqual, static_cast<double>(inst.capacity));

  for (int c = 0; c < inst.n; ++c) {
    const std::string tag = std::to_string(c);
    if (encoding == Encoding::ReluPlus) {
      km.embeddings.push_back(encode_relu_plus(model, net, km.items[c], tag));
    } else {
      const NodeBounds bounds = propagate_bounds(net, {0.0, static_cast<double>(inst.m[c])});
      km.embeddings.push_back(encode_classic(model, net, km.items[c], tag, bounds, policy));
    }
    km.thetas.push_back(km.embeddings.back().output);
  }

  // v X - p (theta - X) = (v + p) X - p theta
  LinExpr obj;
  for (int c = 0; c < inst.n; ++c) {
    obj.add(km.items[c], inst.v[c] + inst.p[c]);
    obj.add(km.thetas[c], -inst.p[c]);
  }
  model.set_objective(Sense::Maximize, obj);
  return km;
}

OracleResult oracle_enumerate(const KnapsackInstance& inst, const std::function<double(int)>& square,
                              long long budget) {
  long long combos = 1;
  for (int mc : inst.m) {
    if (combos > budget / (mc + 1)) {
      throw Error(ErrorCode::BudgetExceeded, "more than " + std::to_string(budget) + " assignments");
    }
    combos *= mc + 1;
  }

  // Per-class contribution table.
  std::vector<std::vector<double>> gain(inst.n);
  for (int c = 0; c < inst.n; ++c) {
    for (int x = 0; x <= inst.m[c]; ++x) {
      gain[c].push_back(inst.v[c] * static_cast<double>(x) - inst.p[c] * (square(x) - x));
    }
  }

  OracleResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<int> x(inst.n, 0);
  // Depth-first over classes; partial sums accumulated per level.
  auto recurse = [&](auto&& self, int c, long long used, double value) -> void {
    if (used > inst.capacity) return;
    if (c == inst.n) {
      ++best.evaluated;
      if (value > best.objective) {
        best.objective = value;
        best.x = x;
        best.feasible = true;
      }
      return;
    }
    for (int k = 0; k <= inst.m[c]; ++k) {
      x[c] = k;
      self(self, c + 1, used + static_cast<long long>(inst.s[c]) * k, value + gain[c][k]);
    }
    x[c] = 0;
  };
  recurse(recurse, 0, 0, 0.0);
  if (!best.feasible) best.objective = 0.0;
  return best;
}

std::string oracle_to_json(const OracleResult& result) {
  nlohmann::ordered_json j;
  j["feasible"] = result.feasible;
  j["X"] = result.x;
  j["objective"] = result.objective;
  j["evaluated"] = result.evaluated;
  return j.dump() + "\n";
}

OracleResult oracle_true(const KnapsackInstance& inst, long long budget) {
  return oracle_enumerate(inst, [](int x) { return static_cast<double>(x) * x; }, budget);
}

OracleResult oracle_nn(const KnapsackInstance& inst, const ReluNet& net, long long budget) {
  return oracle_enumerate(inst, [&](int x) { return net.forward(x); }, budget);
}

}  // namespace relulab
