#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "relulab/relu_net.hpp"

namespace relulab {

// CSV tables with headers `j_hat,i,j,w` and `i,j,b`. Parse failures throw
// Error(ParseError) naming the offending line number.
std::vector<WeightRecord> parse_weight_csv(std::istream& in);
std::vector<BiasRecord> parse_bias_csv(std::istream& in);
void write_weight_csv(std::ostream& out, const ReluNet& net);
void write_bias_csv(std::ostream& out, const ReluNet& net);

// Sidecar: {"layer_sizes": [1, 3, 10, 1]}
std::vector<int> parse_layer_sizes_json(std::istream& in);
// Inline form "1,3,10,1".
std::vector<int> parse_layer_sizes_list(const std::string& text);

ReluNet load_net_files(const std::filesystem::path& weights_csv,
                       const std::filesystem::path& biases_csv,
                       const std::vector<int>& layer_sizes);
std::vector<int> load_layer_sizes_file(const std::filesystem::path& path);

}  // namespace relulab
