#include "leafspec/operator_expr.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "leafspec/errors.hpp"

namespace leafspec::symbol {

using nlohmann::json;

OperatorExpr OperatorExpr::identity() {
  return OperatorExpr(std::make_shared<const Node>(Node{}));
}

OperatorExpr OperatorExpr::S() {
  Node n;
  n.kind = Kind::gen_s;
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::mult(std::string coeff_id) {
  if (coeff_id.empty()) throw ConfigError("multiplication generator needs a coefficient id");
  Node n;
  n.kind = Kind::gen_mult;
  n.coeff = std::move(coeff_id);
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::P() {
  Node n;
  n.kind = Kind::scale;
  n.tag = Tag::p;
  n.scalar = 0.5;
  n.args = {sum({identity(), S()})};
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::Q() {
  Node n;
  n.kind = Kind::scale;
  n.tag = Tag::q;
  n.scalar = 0.5;
  n.args = {sum({identity(), scale(-1.0, S())})};
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::sum(std::vector<OperatorExpr> args) {
  if (args.empty()) throw ConfigError("sum needs at least one operand");
  Node n;
  n.kind = Kind::sum;
  n.args = std::move(args);
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::product(std::vector<OperatorExpr> args) {
  if (args.empty()) throw ConfigError("product needs at least one operand");
  Node n;
  n.kind = Kind::product;
  n.args = std::move(args);
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::scale(Complex c, OperatorExpr arg) {
  Node n;
  n.kind = Kind::scale;
  n.scalar = c;
  n.args = {std::move(arg)};
  return OperatorExpr(std::make_shared<const Node>(std::move(n)));
}

OperatorExpr OperatorExpr::aP_plus_Q(const std::string& coeff_id) {
  return sum({product({mult(coeff_id), P()}), Q()});
}

int OperatorExpr::degree() const {
  switch (kind()) {
    case Kind::identity:
    case Kind::gen_s:
      return 0;
    case Kind::gen_mult:
      return 1;
    case Kind::scale:
      return args()[0].degree();
    case Kind::sum: {
      int d = 0;
      for (const auto& a : args()) d = std::max(d, a.degree());
      return d;
    }
    case Kind::product: {
      int d = 0;
      for (const auto& a : args()) d += a.degree();
      return d;
    }
  }
  return 0;
}

std::set<std::string> OperatorExpr::coefficient_ids() const {
  std::set<std::string> ids;
  if (kind() == Kind::gen_mult) ids.insert(coeff_id());
  for (const auto& a : args()) {
    const auto sub = a.coefficient_ids();
    ids.insert(sub.begin(), sub.end());
  }
  return ids;
}

std::optional<std::string> OperatorExpr::match_aP_plus_Q() const {
  if (kind() != Kind::sum || args().size() != 2) return std::nullopt;
  for (int first = 0; first < 2; ++first) {
    const OperatorExpr& ap = args()[first];
    const OperatorExpr& q = args()[1 - first];
    if (q.tag() != Tag::q) continue;
    if (ap.kind() != Kind::product || ap.args().size() != 2) continue;
    if (ap.args()[0].kind() == Kind::gen_mult && ap.args()[1].tag() == Tag::p) {
      return ap.args()[0].coeff_id();
    }
  }
  return std::nullopt;
}

bool OperatorExpr::operator==(const OperatorExpr& other) const {
  if (node_ == other.node_) return true;
  return kind() == other.kind() && tag() == other.tag() && coeff_id() == other.coeff_id() &&
         scalar() == other.scalar() && args() == other.args();
}

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  return OperatorExpr::sum({a, b});
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  return OperatorExpr::product({a, b});
}

OperatorExpr operator*(Complex c, const OperatorExpr& a) { return OperatorExpr::scale(c, a); }

namespace {

Complex parse_scalar(const json& j, const std::string& pointer) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError(pointer, "expected a number or [re, im]");
}

}  // namespace

OperatorExpr expr_from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw SchemaError(pointer, "operator expression must be an object");
  if (j.contains("gen")) {
    const json& g = j["gen"];
    if (!g.is_string()) throw SchemaError(pointer + "/gen", "expected a string");
    const std::string gen = g.get<std::string>();
    if (gen == "S") return OperatorExpr::S();
    if (gen == "P") return OperatorExpr::P();
    if (gen == "Q") return OperatorExpr::Q();
    if (gen == "I") return OperatorExpr::identity();
    if (gen == "mult") {
      if (!j.contains("coeff") || !j["coeff"].is_string()) {
        throw SchemaError(pointer + "/coeff", "multiplication generator needs a coefficient id");
      }
      return OperatorExpr::mult(j["coeff"].get<std::string>());
    }
    throw SchemaError(pointer + "/gen", "unknown generator '" + gen + "'");
  }
  if (!j.contains("op") || !j["op"].is_string()) {
    throw SchemaError(pointer, "expected a 'gen' or 'op' member");
  }
  const std::string op = j["op"].get<std::string>();
  if (op == "scale") {
    if (!j.contains("c")) throw SchemaError(pointer + "/c", "scale needs a scalar 'c'");
    if (!j.contains("arg")) throw SchemaError(pointer + "/arg", "scale needs an 'arg'");
    return OperatorExpr::scale(parse_scalar(j["c"], pointer + "/c"),
                               expr_from_json(j["arg"], pointer + "/arg"));
  }
  if (op != "sum" && op != "prod") throw SchemaError(pointer + "/op", "unknown op '" + op + "'");
  if (!j.contains("args") || !j["args"].is_array() || j["args"].empty()) {
    throw SchemaError(pointer + "/args", "expected a nonempty array");
  }
  std::vector<OperatorExpr> args;
  for (std::size_t i = 0; i < j["args"].size(); ++i) {
    args.push_back(expr_from_json(j["args"][i], pointer + "/args/" + std::to_string(i)));
  }
  return op == "sum" ? OperatorExpr::sum(std::move(args)) : OperatorExpr::product(std::move(args));
}

json expr_to_json(const OperatorExpr& e) {
  using Kind = OperatorExpr::Kind;
  if (e.tag() == OperatorExpr::Tag::p) return {{"gen", "P"}};
  if (e.tag() == OperatorExpr::Tag::q) return {{"gen", "Q"}};
  switch (e.kind()) {
    case Kind::identity:
      return {{"gen", "I"}};
    case Kind::gen_s:
      return {{"gen", "S"}};
    case Kind::gen_mult:
      return {{"gen", "mult"}, {"coeff", e.coeff_id()}};
    case Kind::scale:
      return {{"op", "scale"},
              {"c", json::array({e.scalar().real(), e.scalar().imag()})},
              {"arg", expr_to_json(e.args()[0])}};
    case Kind::sum:
    case Kind::product: {
      json args = json::array();
      for (const auto& a : e.args()) args.push_back(expr_to_json(a));
      return {{"op", e.kind() == Kind::sum ? "sum" : "prod"}, {"args", args}};
    }
  }
  return {};
}

}  // namespace leafspec::symbol
