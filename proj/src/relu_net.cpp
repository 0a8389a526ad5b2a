#include "relulab/relu_net.hpp"

#include <algorithm>
#include <string>

#include "relulab/error.hpp"

namespace relulab {

namespace {

std::string cell_name(int from, int layer, int to) {
  return "W(" + std::to_string(from) + "," + std::to_string(layer) + "," + std::to_string(to) + ")";
}

std::string cell_name(int layer, int node) {
  return "B(" + std::to_string(layer) + "," + std::to_string(node) + ")";
}

}  // namespace

ReluNet ReluNet::from_records(std::span<const WeightRecord> weights,
                              std::span<const BiasRecord> biases,
                              std::vector<int> layer_sizes) {
  if (layer_sizes.size() < 3) {
    throw Error(ErrorCode::PreconditionViolated, "need at least one hidden layer");
  }
  if (layer_sizes.front() != 1 || layer_sizes.back() != 1) {
    throw Error(ErrorCode::PreconditionViolated, "input and output layers must have exactly one node");
  }
  if (std::any_of(layer_sizes.begin(), layer_sizes.end(), [](int s) { return s < 1; })) {
    throw Error(ErrorCode::PreconditionViolated, "every layer needs at least one node");
  }

  ReluNet net;
  net.sizes_ = std::move(layer_sizes);
  const int layers = static_cast<int>(net.sizes_.size());

  std::vector<std::vector<char>> seen_w(layers - 1);
  std::vector<std::vector<char>> seen_b(layers - 1);
  net.weights_.resize(layers - 1);
  net.biases_.resize(layers - 1);
  for (int i = 1; i < layers; ++i) {
    const auto cells = static_cast<std::size_t>(net.sizes_[i - 1]) * net.sizes_[i];
    net.weights_[i - 1].assign(cells, 0.0);
    seen_w[i - 1].assign(cells, 0);
    net.biases_[i - 1].assign(net.sizes_[i], 0.0);
    seen_b[i - 1].assign(net.sizes_[i], 0);
  }

  for (const WeightRecord& r : weights) {
    if (r.layer < 1 || r.layer >= layers || r.from < 0 || r.from >= net.sizes_[r.layer - 1] ||
        r.to < 0 || r.to >= net.sizes_[r.layer]) {
      throw Error(ErrorCode::IndexOutOfRange, cell_name(r.from, r.layer, r.to));
    }
    const auto k = static_cast<std::size_t>(r.from) * net.sizes_[r.layer] + r.to;
    if (seen_w[r.layer - 1][k]) {
      throw Error(ErrorCode::DuplicateCell, cell_name(r.from, r.layer, r.to));
    }
    seen_w[r.layer - 1][k] = 1;
    net.weights_[r.layer - 1][k] = r.value;
  }
  for (const BiasRecord& r : biases) {
    if (r.layer < 1 || r.layer >= layers || r.node < 0 || r.node >= net.sizes_[r.layer]) {
      throw Error(ErrorCode::IndexOutOfRange, cell_name(r.layer, r.node));
    }
    if (seen_b[r.layer - 1][r.node]) {
      throw Error(ErrorCode::DuplicateCell, cell_name(r.layer, r.node));
    }
    seen_b[r.layer - 1][r.node] = 1;
    net.biases_[r.layer - 1][r.node] = r.value;
  }

  for (int i = 1; i < layers; ++i) {
    for (int from = 0; from < net.sizes_[i - 1]; ++from) {
      for (int to = 0; to < net.sizes_[i]; ++to) {
        if (!seen_w[i - 1][static_cast<std::size_t>(from) * net.sizes_[i] + to]) {
          throw Error(ErrorCode::MissingCell, cell_name(from, i, to));
        }
      }
    }
    for (int j = 0; j < net.sizes_[i]; ++j) {
      if (!seen_b[i - 1][j]) throw Error(ErrorCode::MissingCell, cell_name(i, j));
    }
  }

  net.refresh_certificate();
  return net;
}

void ReluNet::refresh_certificate() {
  nonneg_ = std::all_of(weights_.begin(), weights_.end(), [](const std::vector<double>& w) {
    return std::all_of(w.begin(), w.end(), [](double v) { return v >= 0.0; });
  });
}

int ReluNet::hidden_node_count() const {
  int total = 0;
  for (int i = 1; i <= hidden_layer_count(); ++i) total += sizes_[i];
  return total;
}

double ReluNet::forward(double x) const {
  std::vector<double> prev{x};
  std::vector<double> next;
  const int out = output_layer();
  for (int i = 1; i <= out; ++i) {
    next.assign(sizes_[i], 0.0);
    for (int j = 0; j < sizes_[i]; ++j) {
      double z = bias(i, j);
      for (int k = 0; k < sizes_[i - 1]; ++k) z += weight(i, k, j) * prev[k];
      next[j] = i == out ? z : std::max(0.0, z);
    }
    prev.swap(next);
  }
  return prev[0];
}

ForwardTrace ReluNet::trace(double x) const {
  ForwardTrace t;
  std::vector<double> prev{x};
  const int out = output_layer();
  for (int i = 1; i <= out; ++i) {
    std::vector<double> pre(sizes_[i]);
    for (int j = 0; j < sizes_[i]; ++j) {
      double z = bias(i, j);
      for (int k = 0; k < sizes_[i - 1]; ++k) z += weight(i, k, j) * prev[k];
      pre[j] = z;
    }
    if (i == out) {
      t.output = pre[0];
      break;
    }
    std::vector<double> post(pre.size());
    std::transform(pre.begin(), pre.end(), post.begin(), [](double z) { return std::max(0.0, z); });
    t.pre.push_back(std::move(pre));
    t.post.push_back(post);
    prev = std::move(post);
  }
  return t;
}

std::vector<WeightRecord> ReluNet::weight_records() const {
  std::vector<WeightRecord> out;
  for (int i = 1; i <= output_layer(); ++i) {
    for (int from = 0; from < sizes_[i - 1]; ++from) {
      for (int to = 0; to < sizes_[i]; ++to) out.push_back({from, i, to, weight(i, from, to)});
    }
  }
  return out;
}

std::vector<BiasRecord> ReluNet::bias_records() const {
  std::vector<BiasRecord> out;
  for (int i = 1; i <= output_layer(); ++i) {
    for (int j = 0; j < sizes_[i]; ++j) out.push_back({i, j, bias(i, j)});
  }
  return out;
}

ReluNet ReluNet::with_weight(int layer, int from, int to, double value) const {
  if (layer < 1 || layer > output_layer() || from < 0 || from >= sizes_[layer - 1] || to < 0 ||
      to >= sizes_[layer]) {
    throw Error(ErrorCode::IndexOutOfRange, cell_name(from, layer, to));
  }
  ReluNet copy = *this;
  copy.weights_[layer - 1][static_cast<std::size_t>(from) * sizes_[layer] + to] = value;
  copy.refresh_certificate();
  return copy;
}

CompatibilityReport validate_relu_plus_compatible(const ReluNet& net) {
  CompatibilityReport report;
  for (const WeightRecord& w : net.weight_records()) {
    if (w.value < 0.0) report.violations.push_back({w.from, w.layer, w.to, w.value});
  }
  report.compatible = report.violations.empty();
  return report;
}

}  // namespace relulab
