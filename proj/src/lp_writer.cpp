#include <sstream>

#include "relulab/lin_model.hpp"
#include "relulab/text_format.hpp"

namespace relulab {

namespace {

constexpr std::size_t kMaxLine = 200;

// Writes " + 3 x - 2 y" wrapped at kMaxLine, continuation lines indented.
void write_terms(std::ostringstream& out, std::size_t& col, const LinModel& model, const LinExpr& expr) {
  bool first = true;
  for (const Term& t : expr.terms()) {
    std::string piece;
    const double mag = t.coef < 0 ? -t.coef : t.coef;
    if (t.coef < 0) {
      piece = first ? "-" : "- ";
    } else if (!first) {
      piece = "+ ";
    }
    if (mag != 1.0) piece += format_number(mag) + " ";
    piece += model.var(t.var).name;
    if (col + piece.size() + 1 > kMaxLine) {
      out << "\n   ";
      col = 3;
    } else {
      out << ' ';
      ++col;
    }
    out << piece;
    col += piece.size();
    first = false;
  }
  if (first) {
    // Empty expression: LP format needs at least one term.
    const std::string piece = model.num_vars() > 0 ? "0 " + model.variables().front().name : "0";
    out << ' ' << piece;
    col += piece.size() + 1;
  }
}

std::string_view relation_text(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "=";
}

std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return format_number(v);
}

}  // namespace

std::string export_lp(const LinModel& model) {
  std::ostringstream out;
  const ModelStats s = model.stats();
  out << "\\ relulab model: " << s.variables() << " variables (" << s.continuous << " continuous, "
      << s.integer << " integer, " << s.binary << " binary), " << s.constraints << " constraints\n";

  const Objective& obj = model.objective();
  out << (obj.sense == Sense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  std::size_t col = 5;
  write_terms(out, col, model, obj.expr);
  if (obj.offset != 0.0) {
    out << (obj.offset < 0 ? " - " : " + ") << format_number(obj.offset < 0 ? -obj.offset : obj.offset);
  }
  out << "\nSubject To\n";
  for (const Constraint& c : model.constraints()) {
    out << ' ' << c.name << ':';
    col = c.name.size() + 2;
    write_terms(out, col, model, c.expr);
    out << ' ' << relation_text(c.relation) << ' ' << format_number(c.rhs) << '\n';
  }

  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
    out << ' ';
    if (v.lower == v.upper) {
      out << v.name << " = " << format_number(v.lower);
    } else if (v.lower == -kInf && v.upper == kInf) {
      out << v.name << " free";
    } else if (v.upper == kInf) {
      out << v.name << " >= " << bound_text(v.lower);
    } else {
      out << bound_text(v.lower) << " <= " << v.name << " <= " << bound_text(v.upper);
    }
    out << '\n';
  }

  auto write_section = [&](std::string_view title, VarKind kind) {
    bool any = false;
    col = 0;
    for (const Variable& v : model.variables()) {
      if (v.kind != kind) continue;
      if (!any) out << title << '\n';
      any = true;
      if (col > 0 && col + v.name.size() + 1 > kMaxLine) {
        out << '\n';
        col = 0;
      }
      out << ' ' << v.name;
      col += v.name.size() + 1;
    }
    if (any) out << '\n';
  };
  write_section("General", VarKind::Integer);
  write_section("Binary", VarKind::Binary);
  out << "End\n";
  return out.str();
}

}  // namespace relulab
