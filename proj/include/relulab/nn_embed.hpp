#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relulab/lin_model.hpp"
#include "relulab/relu_net.hpp"

namespace relulab {

enum class Encoding { Classic, ReluPlus };

std::string_view to_string(Encoding e);
Encoding parse_encoding(std::string_view text);  // "classic" | "reluplus"

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Smallest big-M value emitted for a node, so a constraint never degenerates
// to a zero coefficient on its indicator.
inline constexpr double kBigMFloor = 1e-6;

/// Pre-activation intervals of every hidden node for inputs in `input`.
struct NodeBounds {
  Interval input;
  std::vector<std::vector<Interval>> pre;  // [hidden layer - 1][node]

  const Interval& node(int layer, int j) const { return pre[layer - 1][j]; }
  // M for sigma <= M y: dominates every attainable activation.
  double on_m(int layer, int j) const;
  // M for sigma <= pre + M (1 - y): dominates every attainable -pre.
  double off_m(int layer, int j) const;
};

/// Interval bound propagation through the hidden layers. Signs of the
/// weights are respected, so the result is valid for any network.
NodeBounds propagate_bounds(const ReluNet& net, Interval input);

struct BigMPolicy {
  enum class Kind { PerNode, Global } kind = Kind::PerNode;
  double global_value = 1e5;

  static BigMPolicy parse(std::string_view text);  // "pernode" | "global:VALUE"
  std::string describe() const;
};

struct EmbeddingHandle {
  Encoding encoding = Encoding::ReluPlus;
  VarId input;
  VarId output;
  std::vector<std::vector<VarId>> sigma;   // [hidden layer - 1][node]
  std::vector<std::vector<VarId>> active;  // classic only
  std::vector<ConstraintId> constraints;
  // ReLU+ is exact only when the host objective pushes `output` down.
  bool requires_min_pressure = false;
};

/// Big-M mixed-integer embedding: per hidden node a lower-bound row, an
/// off-switch row and an on-switch row, plus the output equality.
///
/// The input variable must have finite bounds contained in
/// `bounds.input`; Error(InfiniteInputBounds) otherwise.
EmbeddingHandle encode_classic(LinModel& model, const ReluNet& net, VarId input, std::string_view tag,
                               const NodeBounds& bounds, const BigMPolicy& policy = {});

/// Binary-free embedding: only the lower-bound rows and the output equality.
/// Rejects networks with any negative weight (NegativeWeightRejected).
EmbeddingHandle encode_relu_plus(LinModel& model, const ReluNet& net, VarId input, std::string_view tag);

}  // namespace relulab
