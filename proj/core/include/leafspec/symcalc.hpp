#pragma once

// Piecewise constant matrix coefficients, the local symbol sigma_{t,z} of
// operator expressions, the two-projections realization and the determinant
// test over the bundle of leaves.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "leafspec/operator_expr.hpp"

namespace leafspec::symbol {

using Matrix = Eigen::MatrixXcd;

struct MatrixJump {
  Matrix a_minus;  // a(t - 0)
  Matrix a_plus;   // a(t + 0)
};

/// Position of every label along the orientation of the curve (node index
/// or any increasing parameter).
using LabelPositions = std::map<std::string, double>;

class PCCoefficient {
 public:
  struct Piece {
    std::string start_label;
    Matrix value;
  };

  PCCoefficient() = default;
  /// Pieces in any order; they are sorted along the orientation when
  /// positions are known.
  PCCoefficient(std::size_t size_N, std::vector<Piece> pieces);
  static PCCoefficient scalar_jump(const std::string& start_a, Complex a,
                                   const std::string& start_b, Complex b);
  static PCCoefficient constant(Complex c);

  std::size_t size() const { return size_N_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Pieces sorted by position. Throws ReferenceError for unknown labels and
  /// ConfigError for repeated positions.
  std::vector<Piece> ordered(const LabelPositions& positions) const;
  /// Limits at the label t following the orientation.
  MatrixJump jump_at(const std::string& t_label, const LabelPositions& positions) const;
  /// Value on the arc containing `position` (a piece start belongs to its piece).
  Matrix value_at(double position, const LabelPositions& positions) const;
  /// Labels where the value changes.
  std::vector<std::string> jump_labels(const LabelPositions& positions) const;

 private:
  std::size_t size_N_ = 1;
  std::vector<Piece> pieces_;
};

struct LocalData {
  double p = 2.0;
  double delta_minus = 0.0;
  double delta_plus = 0.0;
};

struct SymbolContext {
  std::map<std::string, PCCoefficient> coefficients;
  LabelPositions positions;
  std::map<std::string, LocalData> local;  // needed at every jump point

  /// Common size of the coefficients (1 when there are none).
  std::size_t size_N() const;
  /// Throws ReferenceError/ConfigError on unresolved ids or mixed sizes.
  void check(const OperatorExpr& expr) const;
};

Matrix sigma_S(std::size_t N);
/// sqrt_sign picks the root w = +-sqrt(z(1-z)).
Matrix sigma_a(const MatrixJump& jump, Complex z, int sqrt_sign = 1);
Matrix sigma_expr(const OperatorExpr& expr, const std::string& t_label, Complex z,
                  const SymbolContext& ctx, int sqrt_sign = 1);
/// Symbol with precomputed jumps of every coefficient at t.
Matrix sigma_expr(const OperatorExpr& expr, const std::map<std::string, MatrixJump>& jumps,
                  std::size_t N, Complex z, int sqrt_sign = 1);

Complex determinant(const Matrix& m);

/// The 2N x 2N matrix s of the two-projections realization at z.
Matrix two_projections_s(std::size_t N, Complex z, int sqrt_sign = 1);
/// p q p + (I - p)(I - q)(I - p); inputs must be idempotent within 1e-10.
Matrix two_projections_x(const Matrix& p, const Matrix& q);

inline constexpr double kDetMargin = 1e-8;

struct Witness {
  std::string t_label;
  Complex z;

  bool operator==(const Witness&) const = default;
};

struct BundleVerdict {
  bool fredholm = true;
  double min_abs_det = 0.0;
  std::optional<Witness> witness;
  bool exact = false;  // decided by the closed-form root of aP + Q

  bool operator==(const BundleVerdict&) const = default;
};

/// Checks det sigma_{t,z}(expr) over the leaves at every jump point and the
/// z-independent symbol on every elementary arc between jump points.
BundleVerdict bundle_fredholm_test(const OperatorExpr& expr, const SymbolContext& ctx,
                                   std::size_t z_samples_per_leaf = 512,
                                   double margin = kDetMargin);

}  // namespace leafspec::symbol
