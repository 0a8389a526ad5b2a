#include "relulab/nn_embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "relulab/error.hpp"
#include "relulab/text_format.hpp"

namespace relulab {

std::string_view to_string(Encoding e) { return e == Encoding::Classic ? "classic" : "reluplus"; }

Encoding parse_encoding(std::string_view text) {
  if (text == "classic") return Encoding::Classic;
  if (text == "reluplus" || text == "relu+") return Encoding::ReluPlus;
  throw Error(ErrorCode::PreconditionViolated, "unknown encoding '" + std::string(text) + "'");
}

double NodeBounds::on_m(int layer, int j) const { return std::max(node(layer, j).hi, kBigMFloor); }
double NodeBounds::off_m(int layer, int j) const { return std::max(-node(layer, j).lo, kBigMFloor); }

NodeBounds propagate_bounds(const ReluNet& net, Interval input) {
  if (!(input.lo <= input.hi)) {
    throw Error(ErrorCode::PreconditionViolated, "empty input interval");
  }
  NodeBounds out;
  out.input = input;
  std::vector<Interval> prev{input};
  for (int i = 1; i <= net.hidden_layer_count(); ++i) {
    std::vector<Interval> pre(net.layer_size(i));
    for (int j = 0; j < net.layer_size(i); ++j) {
      double lo = net.bias(i, j);
      double hi = lo;
      for (int k = 0; k < net.layer_size(i - 1); ++k) {
        const double w = net.weight(i, k, j);
        lo += w >= 0 ? w * prev[k].lo : w * prev[k].hi;
        hi += w >= 0 ? w * prev[k].hi : w * prev[k].lo;
      }
      pre[j] = {lo, hi};
    }
    prev.resize(pre.size());
    std::transform(pre.begin(), pre.end(), prev.begin(),
                   [](Interval z) { return Interval{std::max(0.0, z.lo), std::max(0.0, z.hi)}; });
    out.pre.push_back(std::move(pre));
  }
  return out;
}

BigMPolicy BigMPolicy::parse(std::string_view text) {
  if (text == "pernode") return {};
  constexpr std::string_view prefix = "global:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double v = 0;
    const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec == std::errc() && p == num.data() + num.size() && v > 0 && std::isfinite(v)) {
      return {Kind::Global, v};
    }
  }
  throw Error(ErrorCode::PreconditionViolated, "big-M policy must be 'pernode' or 'global:VALUE'");
}

std::string BigMPolicy::describe() const {
  return kind == Kind::PerNode ? "pernode" : "global:" + format_number(global_value);
}

namespace {

std::string node_name(std::string_view base, int i, int j, std::string_view tag) {
  return std::string(base) + "_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::string(tag);
}

// Weighted input of node (i, j): x for the first layer, sigma of layer i-1 otherwise.
LinExpr weighted_input(const ReluNet& net, const EmbeddingHandle& h, int i, int j) {
  LinExpr e;
  if (i == 1) {
    e.add(h.input, net.weight(1, 0, j));
  } else {
    for (int k = 0; k < net.layer_size(i - 1); ++k) e.add(h.sigma[i - 2][k], net.weight(i, k, j));
  }
  return e;
}

// Shared skeleton: sigma >= 0 variables, lower-bound rows and output row.
// `per_node` adds the extra classic rows after each lower-bound row.
template <typename PerNode>
EmbeddingHandle emit(LinModel& model, const ReluNet& net, VarId input, std::string_view tag, Encoding kind,
                     PerNode per_node) {
  EmbeddingHandle h;
  h.encoding = kind;
  h.input = input;
  for (int i = 1; i <= net.hidden_layer_count(); ++i) {
    h.sigma.emplace_back();
    if (kind == Encoding::Classic) h.active.emplace_back();
    for (int j = 0; j < net.layer_size(i); ++j) {
      h.sigma.back().push_back(model.add_var(node_name("sigma", i, j, tag), VarKind::Continuous, 0.0, kInf));
      if (kind == Encoding::Classic) {
        h.active.back().push_back(model.add_var(node_name("y", i, j, tag), VarKind::Binary, 0.0, 1.0));
      }
    }
  }
  h.output = model.add_var("theta_" + std::string(tag), VarKind::Continuous, -kInf, kInf);

  for (int i = 1; i <= net.hidden_layer_count(); ++i) {
    for (int j = 0; j < net.layer_size(i); ++j) {
      const VarId sigma = h.sigma[i - 1][j];
      // sigma - W.in >= B
      LinExpr lower = weighted_input(net, h, i, j).scale(-1.0);
      lower.add(sigma, 1.0);
      h.constraints.push_back(model.add_constraint(node_name("relu_lb", i, j, tag), lower, Relation::GreaterEqual,
                                                   net.bias(i, j)));
      per_node(h, i, j);
    }
  }
  LinExpr out;
  out.add(h.output, 1.0);
  const int last = net.hidden_layer_count();
  for (int k = 0; k < net.layer_size(last); ++k) out.add(h.sigma[last - 1][k], -net.weight(last + 1, k, 0));
  h.constraints.push_back(
      model.add_constraint("net_out_" + std::string(tag), out, Relation::Equal, net.bias(last + 1, 0)));
  return h;
}

}  // namespace

EmbeddingHandle encode_classic(LinModel& model, const ReluNet& net, VarId input, std::string_view tag,
                               const NodeBounds& bounds, const BigMPolicy& policy) {
  const Variable& in = model.var(input);
  if (!std::isfinite(in.lower) || !std::isfinite(in.upper)) {
    throw Error(ErrorCode::InfiniteInputBounds, in.name);
  }
  if (in.lower < bounds.input.lo || in.upper > bounds.input.hi) {
    throw Error(ErrorCode::PreconditionViolated,
                "bounds of " + in.name + " are not covered by the propagated input interval");
  }
  if (static_cast<int>(bounds.pre.size()) != net.hidden_layer_count()) {
    throw Error(ErrorCode::PreconditionViolated, "node bounds do not match the network");
  }
  const bool global = policy.kind == BigMPolicy::Kind::Global;
  return emit(model, net, input, tag, Encoding::Classic, [&](EmbeddingHandle& h, int i, int j) {
    const VarId sigma = h.sigma[i - 1][j];
    const VarId y = h.active[i - 1][j];
    const double m_on = global ? policy.global_value : bounds.on_m(i, j);
    const double m_off = global ? policy.global_value : bounds.off_m(i, j);
    // sigma <= M y
    h.constraints.push_back(model.add_constraint(node_name("relu_off", i, j, tag), LinExpr{{sigma, 1.0}, {y, -m_on}},
                                                 Relation::LessEqual, 0.0));
    // sigma <= W.in + B + M (1 - y)
    LinExpr upper = weighted_input(net, h, i, j).scale(-1.0);
    upper.add(sigma, 1.0).add(y, m_off);
    h.constraints.push_back(
        model.add_constraint(node_name("relu_on", i, j, tag), upper, Relation::LessEqual, net.bias(i, j) + m_off));
  });
}

EmbeddingHandle encode_relu_plus(LinModel& model, const ReluNet& net, VarId input, std::string_view tag) {
  const CompatibilityReport report = validate_relu_plus_compatible(net);
  if (!report.compatible) {
    const WeightViolation& v = report.violations.front();
    throw Error(ErrorCode::NegativeWeightRejected,
                std::to_string(report.violations.size()) + " negative weight(s), first W(" + std::to_string(v.from) +
                    "," + std::to_string(v.layer) + "," + std::to_string(v.to) + ") = " + format_number(v.value));
  }
  EmbeddingHandle h = emit(model, net, input, tag, Encoding::ReluPlus, [](EmbeddingHandle&, int, int) {});
  h.requires_min_pressure = true;
  return h;
}

}  // namespace relulab
