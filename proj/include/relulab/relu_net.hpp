#pragma once

#include <span>
#include <vector>

namespace relulab {

// One row of the weight table: connection from node `from` of layer
// `layer - 1` to node `to` of layer `layer`. Indices are zero-based.
struct WeightRecord {
  int from = 0;
  int layer = 0;
  int to = 0;
  double value = 0.0;
};

// One row of the bias table: bias of node `node` in layer `layer`.
struct BiasRecord {
  int layer = 0;
  int node = 0;
  double value = 0.0;
};

struct WeightViolation {
  int from = 0;
  int layer = 0;
  int to = 0;
  double value = 0.0;
};

struct CompatibilityReport {
  bool compatible = true;
  std::vector<WeightViolation> violations;
};

// Pre- and post-activation values of every hidden node for one input.
struct ForwardTrace {
  std::vector<std::vector<double>> pre;   // [hidden layer - 1][node]
  std::vector<std::vector<double>> post;  // max(0, pre)
  double output = 0.0;
};

/// Dense single-input/single-output feed-forward network with ReLU hidden
/// layers and an affine output node.
///
/// Layer 0 is the input, layers 1..I are hidden and layer I+1 is the output.
/// Instances are immutable once built and safe to share between threads.
class ReluNet {
 public:
  /// Builds and validates a network from table records.
  ///
  /// Throws Error with IndexOutOfRange, DuplicateCell or MissingCell when the
  /// records do not describe exactly one dense network of `layer_sizes`, and
  /// PreconditionViolated when `layer_sizes` itself is malformed.
  static ReluNet from_records(std::span<const WeightRecord> weights,
                              std::span<const BiasRecord> biases,
                              std::vector<int> layer_sizes);

  int hidden_layer_count() const { return static_cast<int>(sizes_.size()) - 2; }
  int output_layer() const { return static_cast<int>(sizes_.size()) - 1; }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  int layer_size(int layer) const { return sizes_.at(layer); }
  int hidden_node_count() const;

  // `layer` in 1..I+1, `from` indexes layer-1, `to` indexes layer.
  double weight(int layer, int from, int to) const {
    return weights_[layer - 1][static_cast<std::size_t>(from) * sizes_[layer] + to];
  }
  double bias(int layer, int node) const { return biases_[layer - 1][node]; }

  bool nonneg_certified() const { return nonneg_; }

  double forward(double x) const;
  ForwardTrace trace(double x) const;

  std::vector<WeightRecord> weight_records() const;
  std::vector<BiasRecord> bias_records() const;

  // Copy with a single weight replaced; used to inject faults.
  ReluNet with_weight(int layer, int from, int to, double value) const;

 private:
  ReluNet() = default;
  void refresh_certificate();

  std::vector<int> sizes_;
  std::vector<std::vector<double>> weights_;  // row-major [from][to] per layer
  std::vector<std::vector<double>> biases_;
  bool nonneg_ = false;
};

/// True iff every weight is >= 0; each negative weight is listed.
CompatibilityReport validate_relu_plus_compatible(const ReluNet& net);

}  // namespace relulab
