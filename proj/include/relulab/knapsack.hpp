#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "relulab/lin_model.hpp"
#include "relulab/nn_embed.hpp"
#include "relulab/relu_net.hpp"

namespace relulab {

inline constexpr std::string_view kRngName = "mt19937_64+rejection";
inline constexpr std::string_view kCapacityRule = "floor(0.5*sum(s*m))";

// Parameter ranges of generated instances (inclusive).
struct KnapsackRanges {
  static constexpr int v_lo = 50, v_hi = 150;
  static constexpr int s_lo = 10, s_hi = 20;
  static constexpr int p_lo = 5, p_hi = 15;
  static constexpr int m_lo = 2, m_hi = 10;
};

/// Multi-copy knapsack with a quadratic penalty on repeated copies:
///   max sum v_c X_c - p_c (X_c^2 - X_c)  s.t.  sum s_c X_c <= S, 0 <= X_c <= m_c.
struct KnapsackInstance {
  int n = 0;
  std::vector<int> v, s, p, m;
  long long capacity = 0;
  std::uint64_t seed = 0;
  std::string rng = std::string(kRngName);
  std::string capacity_rule = std::string(kCapacityRule);

  friend bool operator==(const KnapsackInstance&, const KnapsackInstance&) = default;
};

// Uniform integer in [lo, hi] by rejection sampling on raw 64-bit output,
// so the stream is identical on every platform.
int uniform_int(std::mt19937_64& rng, int lo, int hi);

KnapsackInstance generate_instance(int n, std::uint64_t seed);

std::string instance_to_json(const KnapsackInstance& inst);
KnapsackInstance instance_from_json(std::istream& in);

struct KnapsackModel {
  LinModel model;
  std::vector<VarId> items;   // X_c
  std::vector<VarId> thetas;  // network output per class
  std::vector<EmbeddingHandle> embeddings;
  ConstraintId capacity;
};

/// Builds the embedded linear model; the per-class copy limit is realized as
/// the upper bound of X_c.
KnapsackModel build_model(const KnapsackInstance& inst, const ReluNet& net, Encoding encoding,
                          const BigMPolicy& policy = {});

struct OracleResult {
  bool feasible = false;
  std::vector<int> x;
  double objective = 0.0;
  long long evaluated = 0;  // complete assignments examined
};

inline constexpr long long kDefaultEnumerationBudget = 10'000'000;

/// Exhaustive maximum of sum v_c X_c - p_c (square(X_c) - X_c). Ties keep the
/// lexicographically smallest X. Throws BudgetExceeded when prod(m_c + 1)
/// exceeds `budget`.
OracleResult oracle_enumerate(const KnapsackInstance& inst, const std::function<double(int)>& square,
                              long long budget = kDefaultEnumerationBudget);

// {"feasible": ..., "X": [...], "objective": ..., "evaluated": ...}
std::string oracle_to_json(const OracleResult& result);

// Exact integer squares.
OracleResult oracle_true(const KnapsackInstance& inst, long long budget = kDefaultEnumerationBudget);
// Network output in place of the square.
OracleResult oracle_nn(const KnapsackInstance& inst, const ReluNet& net, long long budget = kDefaultEnumerationBudget);

}  // namespace relulab
