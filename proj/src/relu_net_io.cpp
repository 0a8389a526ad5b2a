#include "relulab/relu_net_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "relulab/error.hpp"
#include "relulab/text_format.hpp"

namespace relulab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + msg);
}

int to_int(const std::string& s, int line_no) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(line_no, "bad integer '" + s + "'");
  return v;
}

double to_double(const std::string& s, int line_no) {
  double v = 0;
  const char* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  const auto [p, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    fail(line_no, "bad number '" + s + "'");
  }
  return v;
}

// Returns data rows (line number, fields) after checking the header.
std::vector<std::pair<int, std::vector<std::string>>> read_table(std::istream& in,
                                                                  const std::vector<std::string>& header) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_fields(t);
    if (!have_header) {
      if (fields != header) {
        std::string expected;
        for (std::size_t k = 0; k < header.size(); ++k) expected += (k ? "," : "") + header[k];
        fail(line_no, "expected header '" + expected + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      fail(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    rows.emplace_back(line_no, std::move(fields));
  }
  if (!have_header) fail(line_no, "missing header");
  return rows;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
  return in;
}

}  // namespace

std::vector<WeightRecord> parse_weight_csv(std::istream& in) {
  std::vector<WeightRecord> out;
  for (const auto& [line_no, f] : read_table(in, {"j_hat", "i", "j", "w"})) {
    out.push_back({to_int(f[0], line_no), to_int(f[1], line_no), to_int(f[2], line_no),
                   to_double(f[3], line_no)});
  }
  return out;
}

std::vector<BiasRecord> parse_bias_csv(std::istream& in) {
  std::vector<BiasRecord> out;
  for (const auto& [line_no, f] : read_table(in, {"i", "j", "b"})) {
    out.push_back({to_int(f[0], line_no), to_int(f[1], line_no), to_double(f[2], line_no)});
  }
  return out;
}

void write_weight_csv(std::ostream& out, const ReluNet& net) {
  out << "j_hat,i,j,w\n";
  for (const WeightRecord& r : net.weight_records()) {
    out << r.from << ',' << r.layer << ',' << r.to << ',' << format_number(r.value) << '\n';
  }
}

void write_bias_csv(std::ostream& out, const ReluNet& net) {
  out << "i,j,b\n";
  for (const BiasRecord& r : net.bias_records()) {
    out << r.layer << ',' << r.node << ',' << format_number(r.value) << '\n';
  }
}

std::vector<int> parse_layer_sizes_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
    return doc.at("layer_sizes").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("layer sizes: ") + e.what());
  }
}

std::vector<int> parse_layer_sizes_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& f : split_fields(text)) out.push_back(to_int(f, 1));
  return out;
}

std::vector<int> load_layer_sizes_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_layer_sizes_json(in);
}

ReluNet load_net_files(const std::filesystem::path& weights_csv, const std::filesystem::path& biases_csv,
                       const std::vector<int>& layer_sizes) {
  std::vector<WeightRecord> w;
  std::vector<BiasRecord> b;
  {
    auto in = open_in(weights_csv);
    try {
      w = parse_weight_csv(in);
    } catch (const Error& e) {
      throw Error(e.code(), weights_csv.string() + ": " + e.detail());
    }
  }
  {
    auto in = open_in(biases_csv);
    try {
      b = parse_bias_csv(in);
    } catch (const Error& e) {
      throw Error(e.code(), biases_csv.string() + ": " + e.detail());
    }
  }
  return ReluNet::from_records(w, b, layer_sizes);
}

}  // namespace relulab
