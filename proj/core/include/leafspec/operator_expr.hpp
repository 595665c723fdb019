#pragma once

// Immutable expression trees over the generators S and aI.

#include <complex>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace leafspec::symbol {

using Complex = std::complex<double>;

class OperatorExpr {
 public:
  enum class Kind { identity, gen_s, gen_mult, sum, product, scale };
  /// P and Q are stored expanded; the tag keeps the spelling for printing
  /// and for recognizing aP + Q.
  enum class Tag { none, p, q };

  static OperatorExpr identity();
  static OperatorExpr S();
  static OperatorExpr mult(std::string coeff_id);
  static OperatorExpr P();  // (I + S) / 2
  static OperatorExpr Q();  // (I - S) / 2
  static OperatorExpr sum(std::vector<OperatorExpr> args);
  static OperatorExpr product(std::vector<OperatorExpr> args);
  static OperatorExpr scale(Complex c, OperatorExpr arg);
  /// The scalar family a P + Q.
  static OperatorExpr aP_plus_Q(const std::string& coeff_id);

  Kind kind() const { return node_->kind; }
  Tag tag() const { return node_->tag; }
  const std::vector<OperatorExpr>& args() const { return node_->args; }
  const std::string& coeff_id() const { return node_->coeff; }
  Complex scalar() const { return node_->scalar; }

  /// Polynomial degree of the symbol entries in (z, sqrt(z(1-z))).
  int degree() const;
  std::set<std::string> coefficient_ids() const;
  /// Id of `a` if the expression is literally a P + Q (either summand order).
  std::optional<std::string> match_aP_plus_Q() const;

  bool operator==(const OperatorExpr& other) const;

 private:
  struct Node {
    Kind kind = Kind::identity;
    Tag tag = Tag::none;
    std::vector<OperatorExpr> args;
    std::string coeff;
    Complex scalar{1.0, 0.0};
  };
  explicit OperatorExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
OperatorExpr operator*(Complex c, const OperatorExpr& a);

/// Parses the JSON form; `pointer` prefixes SchemaError locations.
OperatorExpr expr_from_json(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json expr_to_json(const OperatorExpr& e);

}  // namespace leafspec::symbol
