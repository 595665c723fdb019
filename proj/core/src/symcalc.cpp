#include "leafspec/symcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

#include "leafspec/errors.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/parallel.hpp"

namespace leafspec::symbol {

namespace {

double position_of(const LabelPositions& positions, const std::string& label) {
  const auto it = positions.find(label);
  if (it == positions.end()) throw ReferenceError("unknown curve label '" + label + "'");
  return it->second;
}

// Index of the piece whose arc contains `pos`.
std::size_t piece_index(const std::vector<PCCoefficient::Piece>& sorted,
                        const std::vector<double>& starts, double pos) {
  const auto it = std::upper_bound(starts.begin(), starts.end(), pos);
  if (it == starts.begin()) return sorted.size() - 1;
  return static_cast<std::size_t>(it - starts.begin()) - 1;
}

std::vector<double> start_positions(const std::vector<PCCoefficient::Piece>& sorted,
                                    const LabelPositions& positions) {
  std::vector<double> starts;
  for (const auto& piece : sorted) starts.push_back(position_of(positions, piece.start_label));
  return starts;
}

Complex sqrt_z1mz(Complex z, int sqrt_sign) {
  const Complex w = std::sqrt(z * (1.0 - z));
  return sqrt_sign < 0 ? -w : w;
}

}  // namespace

PCCoefficient::PCCoefficient(std::size_t size_N, std::vector<Piece> pieces)
    : size_N_(size_N), pieces_(std::move(pieces)) {
  if (size_N_ == 0) throw ConfigError("coefficient size must be positive");
  if (pieces_.empty()) throw ConfigError("coefficient needs at least one piece");
  std::set<std::string> seen;
  for (const auto& piece : pieces_) {
    if (!seen.insert(piece.start_label).second) {
      throw ConfigError("coefficient piece label '" + piece.start_label + "' repeats");
    }
    if (piece.value.rows() != static_cast<Eigen::Index>(size_N_) ||
        piece.value.cols() != static_cast<Eigen::Index>(size_N_)) {
      throw ConfigError("coefficient piece '" + piece.start_label + "' has the wrong size");
    }
    if (!piece.value.allFinite()) throw ConfigError("coefficient values must be finite");
  }
}

PCCoefficient PCCoefficient::scalar_jump(const std::string& start_a, Complex a,
                                         const std::string& start_b, Complex b) {
  return PCCoefficient(1, {{start_a, Matrix::Constant(1, 1, a)}, {start_b, Matrix::Constant(1, 1, b)}});
}

PCCoefficient PCCoefficient::constant(Complex c) {
  return PCCoefficient(1, {{"t", Matrix::Constant(1, 1, c)}});
}

std::vector<PCCoefficient::Piece> PCCoefficient::ordered(const LabelPositions& positions) const {
  std::vector<Piece> sorted = pieces_;
  std::stable_sort(sorted.begin(), sorted.end(), [&](const Piece& a, const Piece& b) {
    return position_of(positions, a.start_label) < position_of(positions, b.start_label);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (position_of(positions, sorted[i].start_label) ==
        position_of(positions, sorted[i - 1].start_label)) {
      throw ConfigError("coefficient pieces '" + sorted[i - 1].start_label + "' and '" +
                        sorted[i].start_label + "' start at the same point");
    }
  }
  return sorted;
}

MatrixJump PCCoefficient::jump_at(const std::string& t_label,
                                  const LabelPositions& positions) const {
  const std::vector<Piece> sorted = ordered(positions);
  const std::vector<double> starts = start_positions(sorted, positions);
  const double pos = position_of(positions, t_label);
  const std::size_t i = piece_index(sorted, starts, pos);
  if (starts[i] == pos) {
    const std::size_t prev = (i + sorted.size() - 1) % sorted.size();
    return {sorted[prev].value, sorted[i].value};
  }
  return {sorted[i].value, sorted[i].value};
}

Matrix PCCoefficient::value_at(double position, const LabelPositions& positions) const {
  const std::vector<Piece> sorted = ordered(positions);
  const std::vector<double> starts = start_positions(sorted, positions);
  return sorted[piece_index(sorted, starts, position)].value;
}

std::vector<std::string> PCCoefficient::jump_labels(const LabelPositions& positions) const {
  const std::vector<Piece> sorted = ordered(positions);
  std::vector<std::string> labels;
  if (sorted.size() < 2) return labels;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t prev = (i + sorted.size() - 1) % sorted.size();
    if (sorted[i].value != sorted[prev].value) labels.push_back(sorted[i].start_label);
  }
  return labels;
}

std::size_t SymbolContext::size_N() const {
  return coefficients.empty() ? 1 : coefficients.begin()->second.size();
}

void SymbolContext::check(const OperatorExpr& expr) const {
  for (const auto& id : expr.coefficient_ids()) {
    const auto it = coefficients.find(id);
    if (it == coefficients.end()) throw ReferenceError("unknown coefficient '" + id + "'");
    it->second.ordered(positions);
  }
  for (const auto& [id, c] : coefficients) {
    if (c.size() != size_N()) throw ConfigError("coefficient '" + id + "' has a different size");
  }
}

Matrix sigma_S(std::size_t N) {
  const Eigen::Index n = static_cast<Eigen::Index>(N);
  Matrix m = Matrix::Identity(2 * n, 2 * n);
  m.bottomRightCorner(n, n) *= -1.0;
  return m;
}

Matrix sigma_a(const MatrixJump& jump, Complex z, int sqrt_sign) {
  const Eigen::Index n = jump.a_minus.rows();
  if (jump.a_plus.rows() != n || jump.a_minus.cols() != n || jump.a_plus.cols() != n) {
    throw ConfigError("one-sided limits must be square of equal size");
  }
  const Complex w = sqrt_z1mz(z, sqrt_sign);
  const Matrix diff = jump.a_plus - jump.a_minus;
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = jump.a_plus * z + jump.a_minus * (1.0 - z);
  m.topRightCorner(n, n) = diff * w;
  m.bottomLeftCorner(n, n) = diff * w;
  m.bottomRightCorner(n, n) = jump.a_plus * (1.0 - z) + jump.a_minus * z;
  return m;
}

Matrix sigma_expr(const OperatorExpr& expr, const std::map<std::string, MatrixJump>& jumps,
                  std::size_t N, Complex z, int sqrt_sign) {
  using Kind = OperatorExpr::Kind;
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(N);
  switch (expr.kind()) {
    case Kind::identity:
      return Matrix::Identity(dim, dim);
    case Kind::gen_s:
      return sigma_S(N);
    case Kind::gen_mult: {
      const auto it = jumps.find(expr.coeff_id());
      if (it == jumps.end()) throw ReferenceError("unknown coefficient '" + expr.coeff_id() + "'");
      return sigma_a(it->second, z, sqrt_sign);
    }
    case Kind::scale:
      return expr.scalar() * sigma_expr(expr.args()[0], jumps, N, z, sqrt_sign);
    case Kind::sum: {
      Matrix m = Matrix::Zero(dim, dim);
      for (const auto& a : expr.args()) m += sigma_expr(a, jumps, N, z, sqrt_sign);
      return m;
    }
    case Kind::product: {
      Matrix m = Matrix::Identity(dim, dim);
      for (const auto& a : expr.args()) m = m * sigma_expr(a, jumps, N, z, sqrt_sign);
      return m;
    }
  }
  return {};
}

Matrix sigma_expr(const OperatorExpr& expr, const std::string& t_label, Complex z,
                  const SymbolContext& ctx, int sqrt_sign) {
  ctx.check(expr);
  std::map<std::string, MatrixJump> jumps;
  for (const auto& id : expr.coefficient_ids()) {
    jumps[id] = ctx.coefficients.at(id).jump_at(t_label, ctx.positions);
  }
  return sigma_expr(expr, jumps, ctx.size_N(), z, sqrt_sign);
}

Complex determinant(const Matrix& m) {
  if (!m.allFinite()) throw InputError("determinant of a non-finite matrix");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

Matrix two_projections_s(std::size_t N, Complex z, int sqrt_sign) {
  const Eigen::Index n = static_cast<Eigen::Index>(N);
  const Complex w = sqrt_z1mz(z, sqrt_sign);
  const Matrix E = Matrix::Identity(n, n);
  Matrix s(2 * n, 2 * n);
  s << z * E, w * E, w * E, (1.0 - z) * E;
  return s;
}

Matrix two_projections_x(const Matrix& p, const Matrix& q) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows()) {
    throw ContractError("two_projections_x needs square matrices of equal size");
  }
  for (const Matrix* m : {&p, &q}) {
    const double scale = std::max(1.0, m->cwiseAbs().maxCoeff());
    if (((*m) * (*m) - *m).cwiseAbs().maxCoeff() > 1e-10 * scale * scale) {
      throw ContractError("two_projections_x needs idempotent inputs");
    }
  }
  const Matrix I = Matrix::Identity(p.rows(), p.cols());
  return p * q * p + (I - p) * (I - q) * (I - p);
}

namespace {

struct PointResult {
  bool fredholm = true;
  double min_abs_det = std::numeric_limits<double>::infinity();
  Complex argmin{};
  std::optional<Complex> root_in_leaf;
  bool exact = false;
};

// Roots of the determinant polynomial, degree <= bound, recovered from
// samples on the circle |z - 1/2| = 1.
std::optional<std::vector<Complex>> determinant_roots(
    const OperatorExpr& expr, const std::map<std::string, MatrixJump>& jumps, std::size_t N,
    int bound, double margin) {
  const int count = bound + 1;
  std::vector<Complex> values(count);
  for (int k = 0; k < count; ++k) {
    const Complex u = std::polar(1.0, 2.0 * std::numbers::pi * k / count);
    values[k] = determinant(sigma_expr(expr, jumps, N, 0.5 + u));
  }
  std::vector<Complex> coeffs(count);
  for (int j = 0; j < count; ++j) {
    Complex s{};
    for (int k = 0; k < count; ++k) {
      s += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / count);
    }
    coeffs[j] = s / static_cast<double>(count);
  }
  double peak = 0.0;
  for (Complex c : coeffs) peak = std::max(peak, std::abs(c));
  if (peak <= margin) return std::nullopt;  // det vanishes identically
  int degree = bound;
  while (degree > 0 && std::abs(coeffs[degree]) <= 1e-12 * peak) --degree;
  std::vector<Complex> roots;
  if (degree == 0) return roots;
  Matrix companion = Matrix::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    roots.push_back(0.5 + solver.eigenvalues()[i]);
  }
  return roots;
}

std::vector<Complex> leaf_samples(const leaf::Leaf& L, std::size_t count) {
  std::vector<Complex> zs = {0.0, 1.0};
  const bool degenerate = L.delta_minus == L.delta_plus;
  const std::size_t boundary = degenerate ? count : count / 2;
  for (const auto& s : leaf::leaf_boundary_sample(L, boundary)) zs.push_back(s.z);
  if (!degenerate) {
    const std::size_t gy = 8;
    const std::size_t gx = (count - boundary) / gy;
    for (std::size_t i = 0; i < gx; ++i) {
      const double x = -1.2 + 2.4 * (static_cast<double>(i) + 0.5) / static_cast<double>(gx);
      const leaf::Indicators ind = leaf::indicators(L.delta_minus, L.delta_plus, x);
      for (std::size_t j = 0; j < gy; ++j) {
        const double y = 1.0 / L.p + ind.alpha +
                         (ind.beta - ind.alpha) * (static_cast<double>(j) + 0.5) / gy;
        zs.push_back(leaf::chart_to_plane(L, x, y));
      }
    }
  }
  return zs;
}

}  // namespace

BundleVerdict bundle_fredholm_test(const OperatorExpr& expr, const SymbolContext& ctx,
                                   std::size_t z_samples_per_leaf, double margin) {
  if (z_samples_per_leaf < 256) throw ParameterError("bundle test needs >= 256 samples per leaf");
  ctx.check(expr);
  const std::size_t N = ctx.size_N();
  const std::set<std::string> ids = expr.coefficient_ids();

  // Jump points of the referenced coefficients, in curve order.
  std::set<std::pair<double, std::string>> jump_set;
  for (const auto& id : ids) {
    for (const auto& label : ctx.coefficients.at(id).jump_labels(ctx.positions)) {
      jump_set.insert({ctx.positions.at(label), label});
    }
  }
  std::vector<std::string> jump_points;
  for (const auto& [pos, label] : jump_set) {
    if (!ctx.local.count(label)) {
      throw ConfigError("missing p and spirality data at jump point '" + label + "'");
    }
    jump_points.push_back(label);
  }

  const std::optional<std::string> scalar_a =
      N == 1 ? expr.match_aP_plus_Q() : std::nullopt;
  const int bound = 2 * static_cast<int>(N) * expr.degree();

  std::vector<PointResult> results(jump_points.size());
  parallel_for(jump_points.size(), [&](std::size_t idx) {
    const std::string& t = jump_points[idx];
    std::map<std::string, MatrixJump> jumps;
    for (const auto& id : ids) jumps[id] = ctx.coefficients.at(id).jump_at(t, ctx.positions);
    const LocalData& data = ctx.local.at(t);
    leaf::Leaf L{0.0, 1.0, data.p, data.delta_minus, data.delta_plus};
    L.validate();

    PointResult& r = results[idx];
    for (Complex z : leaf_samples(L, z_samples_per_leaf)) {
      const double d = std::abs(determinant(sigma_expr(expr, jumps, N, z)));
      if (d < r.min_abs_det) {
        r.min_abs_det = d;
        r.argmin = z;
      }
    }

    if (scalar_a) {
      r.exact = true;
      const Complex am = jumps.at(*scalar_a).a_minus(0, 0);
      const Complex ap = jumps.at(*scalar_a).a_plus(0, 0);
      if (am == ap) {
        r.fredholm = am != Complex{};
        if (!r.fredholm) r.root_in_leaf = leaf::median_point(L);
      } else {
        const Complex z0 = am / (am - ap);
        if (leaf::leaf_contains(L, z0)) {
          r.fredholm = false;
          r.root_in_leaf = z0;
        }
      }
    } else {
      const auto roots = determinant_roots(expr, jumps, N, bound, margin);
      if (!roots) {
        r.fredholm = false;
        r.root_in_leaf = leaf::median_point(L);
      } else {
        for (Complex z : *roots) {
          if (leaf::leaf_contains(L, z)) {
            r.fredholm = false;
            r.root_in_leaf = z;
            break;
          }
        }
      }
      if (r.min_abs_det <= margin) r.fredholm = false;
    }
    if (r.root_in_leaf) {
      r.min_abs_det = 0.0;
      r.argmin = *r.root_in_leaf;
    }
  });

  BundleVerdict verdict;
  verdict.exact = scalar_a.has_value();
  verdict.min_abs_det = std::numeric_limits<double>::infinity();
  std::optional<Witness> failing, minimizing;
  for (std::size_t idx = 0; idx < results.size(); ++idx) {
    const PointResult& r = results[idx];
    if (!r.fredholm) {
      verdict.fredholm = false;
      if (!failing) failing = Witness{jump_points[idx], r.argmin};
    }
    if (r.min_abs_det < verdict.min_abs_det) {
      verdict.min_abs_det = r.min_abs_det;
      minimizing = Witness{jump_points[idx], r.argmin};
    }
  }

  // On each arc between jump points the symbol does not depend on z.
  std::vector<std::string> arc_starts = jump_points;
  if (arc_starts.empty()) {
    arc_starts.push_back(ids.empty() ? std::string("t")
                                     : ctx.coefficients.at(*ids.begin()).pieces().front().start_label);
  }
  for (const auto& start : arc_starts) {
    std::map<std::string, MatrixJump> jumps;
    for (const auto& id : ids) {
      const Matrix v = ctx.coefficients.at(id).value_at(ctx.positions.at(start), ctx.positions);
      jumps[id] = {v, v};
    }
    const double d = std::abs(determinant(sigma_expr(expr, jumps, N, 0.0)));
    if (d < verdict.min_abs_det) {
      verdict.min_abs_det = d;
      minimizing = Witness{start, 0.0};
    }
    if (d <= margin) {
      verdict.fredholm = false;
      if (!failing) failing = Witness{start, 0.0};
    }
  }
  verdict.witness = failing ? failing : minimizing;
  return verdict;
}

}  // namespace leafspec::symbol
