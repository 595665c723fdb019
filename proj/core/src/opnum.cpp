#include "leafspec/opnum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <functional>
#include <numeric>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "leafspec/errors.hpp"
#include "leafspec/parallel.hpp"

namespace leafspec::opnum {

namespace {

// Expands a scalar node operator to N components.
Matrix kron_identity(const Matrix& a, std::size_t N) {
  if (N == 1) return a;
  const Eigen::Index n = a.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(N);
  Matrix out = Matrix::Zero(n * m, n * m);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (a(j, k) == Complex{}) continue;
      for (Eigen::Index c = 0; c < m; ++c) out(j * m + c, k * m + c) = a(j, k);
    }
  }
  return out;
}

}  // namespace

DenseOperator discrete_S(const DiscretizedCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 32) throw ParameterError("discrete_S needs at least 32 nodes");
  if (n % 2 != 0) throw ParameterError("discrete_S needs an even number of nodes");
  const auto& tau = curve.nodes;
  for (std::size_t k = 0; k < n; ++k) {
    if (tau[k] == tau[(k + 1) % n]) throw GeometryError("coincident curve nodes");
  }
  std::vector<Complex> dtau(n);
  for (std::size_t k = 0; k < n; ++k) dtau[k] = 0.5 * (tau[(k + 1) % n] - tau[(k + n - 1) % n]);

  // Alternating point rule: nodes at odd offsets from the row carry twice the
  // trapezoid weight, even offsets none. The principal value is then
  // symmetric about the row node and every Fourier mode below n/2 keeps its
  // sign on the circle.
  const Complex pi_i(0.0, std::numbers::pi);
  DenseOperator op;
  op.entries = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.provenance = "S";
  parallel_for(n, [&](std::size_t j) {
    Complex off_sum{};
    const Eigen::Index row = static_cast<Eigen::Index>(j);
    for (std::size_t k = (j + 1) % 2; k < n; k += 2) {
      const Complex diff = tau[k] - tau[j];
      if (diff == Complex{}) throw GeometryError("coincident curve nodes");
      const Complex v = 2.0 * dtau[k] / (pi_i * diff);
      op.entries(row, static_cast<Eigen::Index>(k)) = v;
      off_sum += v;
    }
    op.entries(row, row) = 1.0 - off_sum;
  });
  return op;
}

symbol::LabelPositions label_positions(const DiscretizedCurve& curve) {
  symbol::LabelPositions positions;
  for (const auto& [label, index] : curve.distinguished_points) {
    positions[label] = static_cast<double>(index);
  }
  return positions;
}

DenseOperator assemble_operator(const symbol::OperatorExpr& expr, const DiscretizedCurve& curve,
                                const Coefficients& coefficients) {
  using Kind = symbol::OperatorExpr::Kind;
  symbol::SymbolContext ctx;
  ctx.coefficients = coefficients;
  ctx.positions = label_positions(curve);
  ctx.check(expr);
  const std::size_t N = ctx.size_N();
  const Eigen::Index n = static_cast<Eigen::Index>(curve.size());
  const Eigen::Index dim = n * static_cast<Eigen::Index>(N);

  Matrix s_cache;
  std::map<std::string, Matrix> mult_cache;

  std::function<Matrix(const symbol::OperatorExpr&)> build = [&](const symbol::OperatorExpr& e) {
    switch (e.kind()) {
      case Kind::identity:
        return Matrix(Matrix::Identity(dim, dim));
      case Kind::gen_s:
        if (s_cache.size() == 0) s_cache = kron_identity(discrete_S(curve).entries, N);
        return s_cache;
      case Kind::gen_mult: {
        auto it = mult_cache.find(e.coeff_id());
        if (it != mult_cache.end()) return it->second;
        const symbol::PCCoefficient& coeff = coefficients.at(e.coeff_id());
        Matrix m = Matrix::Zero(dim, dim);
        const Eigen::Index b = static_cast<Eigen::Index>(N);
        for (Eigen::Index k = 0; k < n; ++k) {
          m.block(k * b, k * b, b, b) = coeff.value_at(static_cast<double>(k), ctx.positions);
        }
        return mult_cache.emplace(e.coeff_id(), std::move(m)).first->second;
      }
      case Kind::scale:
        return Matrix(e.scalar() * build(e.args()[0]));
      case Kind::sum: {
        Matrix m = build(e.args()[0]);
        for (std::size_t i = 1; i < e.args().size(); ++i) m += build(e.args()[i]);
        return m;
      }
      case Kind::product: {
        Matrix m = build(e.args()[0]);
        for (std::size_t i = 1; i < e.args().size(); ++i) m = m * build(e.args()[i]);
        return m;
      }
    }
    return Matrix();
  };

  DenseOperator op;
  op.entries = build(expr);
  op.N = N;
  op.provenance = symbol::expr_to_json(expr).dump();
  return op;
}

double min_singular_value(const DenseOperator& op) {
  if (!op.entries.allFinite()) throw InputError("operator has non-finite entries");
  if (op.entries.size() == 0) throw InputError("empty operator");
  Eigen::BDCSVD<Matrix> svd(op.entries);
  return svd.singularValues().minCoeff();
}

const char* to_string(Trend trend) {
  switch (trend) {
    case Trend::bounded_below:
      return "bounded_below";
    case Trend::decaying:
      return "decaying";
    case Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Trend trend_from_string(const std::string& s) {
  if (s == "bounded_below") return Trend::bounded_below;
  if (s == "decaying") return Trend::decaying;
  if (s == "inconclusive") return Trend::inconclusive;
  throw ConfigError("unknown trend '" + s + "'");
}

Trend classify_trend(std::span<const double> min_svs) {
  if (min_svs.empty()) return Trend::inconclusive;
  const double first = min_svs.front();
  const double last = min_svs.back();
  if (last >= 0.5 * first && last >= 1e-3) return Trend::bounded_below;
  if (last <= 0.5 * first) return Trend::decaying;
  return Trend::inconclusive;
}

FiniteSectionReport finite_section_trend(const symbol::OperatorExpr& expr,
                                         const curve::CurveSpec& spec,
                                         const Coefficients& coefficients,
                                         const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) throw ParameterError("finite_section_trend needs sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 64) throw ParameterError("finite section sizes must be >= 64");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ParameterError("finite section sizes must increase");
  }
  FiniteSectionReport report;
  report.sizes = sizes;
  report.min_svs.resize(sizes.size());
  // Sizes run one after another; each assembly parallelizes internally.
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const DiscretizedCurve c = curve::build_curve(spec, sizes[i]);
    report.min_svs[i] = min_singular_value(assemble_operator(expr, c, coefficients));
  }
  report.trend = classify_trend(report.min_svs);
  return report;
}

std::vector<double> discrete_maximal(std::span<const Complex> f, const DiscretizedCurve& curve,
                                     std::span<const double> eps_grid) {
  const std::size_t n = curve.size();
  if (f.size() != n) throw InputError("function samples are not aligned with the curve");
  for (double eps : eps_grid) {
    if (!(eps > 0.0)) throw ParameterError("eps grid entries must be positive");
  }
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t j) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist(n);
    for (std::size_t k = 0; k < n; ++k) dist[k] = std::abs(curve.nodes[k] - curve.nodes[j]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    std::vector<double> sorted(n), mass(n + 1, 0.0), weighted(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = order[i];
      sorted[i] = dist[k];
      mass[i + 1] = mass[i] + curve.arclen_weights[k];
      weighted[i + 1] = weighted[i] + std::abs(f[k]) * curve.arclen_weights[k];
    }
    double best = 0.0;
    for (double eps : eps_grid) {
      const std::size_t count =
          static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), eps) - sorted.begin());
      if (count == 0 || mass[count] == 0.0) continue;
      best = std::max(best, weighted[count] / mass[count]);
    }
    out[j] = best;
  });
  return out;
}

}  // namespace leafspec::opnum
