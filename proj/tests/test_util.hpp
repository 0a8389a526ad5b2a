#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "relulab/knapsack.hpp"
#include "relulab/relu_net.hpp"
#include "relulab/relu_net_io.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(RELULAB_DATA_DIR) + "/" + name; }

inline relulab::ReluNet fixture_net() {
  return relulab::load_net_files(data_path("square_net_weights.csv"), data_path("square_net_biases.csv"), {1, 3, 10, 1});
}

// Forward pass computed straight from the CSV tables with std::map lookups,
// sharing no code with ReluNet.
class TableNet {
 public:
  TableNet(const std::string& weights_csv, const std::string& biases_csv, std::vector<int> sizes)
      : sizes_(std::move(sizes)) {
    std::ifstream w(weights_csv);
    std::string line;
    std::getline(w, line);
    while (std::getline(w, line)) {
      if (line.empty()) continue;
      int from, layer, to;
      double value;
      char c;
      std::istringstream row(line);
      row >> from >> c >> layer >> c >> to >> c >> value;
      weights_[{from, layer, to}] = value;
    }
    std::ifstream b(biases_csv);
    std::getline(b, line);
    while (std::getline(b, line)) {
      if (line.empty()) continue;
      int layer, node;
      double value;
      char c;
      std::istringstream row(line);
      row >> layer >> c >> node >> c >> value;
      biases_[{layer, node}] = value;
    }
  }

  std::size_t weight_count() const { return weights_.size(); }
  std::size_t bias_count() const { return biases_.size(); }

  double operator()(double x) const {
    std::vector<double> prev{x};
    const int last = static_cast<int>(sizes_.size()) - 1;
    for (int i = 1; i <= last; ++i) {
      std::vector<double> cur(sizes_[i]);
      for (int j = 0; j < sizes_[i]; ++j) {
        double s = biases_.at({i, j});
        for (int k = 0; k < sizes_[i - 1]; ++k) s += weights_.at({k, i, j}) * prev[k];
        cur[j] = i == last ? s : (s > 0.0 ? s : 0.0);
      }
      prev = std::move(cur);
    }
    return prev[0];
  }

 private:
  std::vector<int> sizes_;
  std::map<std::tuple<int, int, int>, double> weights_;
  std::map<std::pair<int, int>, double> biases_;
};

inline const TableNet& fixture_table() {
  static const TableNet t(data_path("square_net_weights.csv"), data_path("square_net_biases.csv"), {1, 3, 10, 1});
  return t;
}

// Dense network with every weight and bias given by `gen(layer, from, to)`
// (bias uses from = -1).
template <class Gen>
relulab::ReluNet make_net(const std::vector<int>& sizes, Gen gen) {
  std::vector<relulab::WeightRecord> w;
  std::vector<relulab::BiasRecord> b;
  for (int i = 1; i < static_cast<int>(sizes.size()); ++i) {
    for (int j = 0; j < sizes[i]; ++j) {
      b.push_back({i, j, gen(i, -1, j)});
      for (int k = 0; k < sizes[i - 1]; ++k) w.push_back({k, i, j, gen(i, k, j)});
    }
  }
  return relulab::ReluNet::from_records(w, b, sizes);
}

// Seeded instance with 1..6 classes and copy limits folded into 2..4, so
// exhaustive enumeration stays tiny. Capacity follows the generator's rule.
inline relulab::KnapsackInstance small_instance(std::uint64_t seed) {
  const int n = 1 + static_cast<int>(seed % 6);
  relulab::KnapsackInstance inst = relulab::generate_instance(n, seed);
  long long demand = 0;
  for (int c = 0; c < n; ++c) {
    inst.m[c] = 2 + inst.m[c] % 3;
    demand += static_cast<long long>(inst.s[c]) * inst.m[c];
  }
  inst.capacity = demand / 2;
  return inst;
}

}  // namespace testutil
