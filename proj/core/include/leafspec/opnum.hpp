#pragma once

// Dense discretizations of S and of operator expressions on sampled curves,
// finite-section singular value trends and the discrete maximal function.

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "leafspec/curvekit.hpp"
#include "leafspec/operator_expr.hpp"
#include "leafspec/symcalc.hpp"

namespace leafspec::opnum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using curve::DiscretizedCurve;

/// Acts on node samples; in the matrix case index k * N + c holds
/// component c at node k.
struct DenseOperator {
  Matrix entries;
  std::size_t N = 1;
  std::string provenance;
};

/// Nystroem matrix of S (alternating point rule) with row sums equal to 1.
/// Needs an even number of nodes, at least 32.
DenseOperator discrete_S(const DiscretizedCurve& curve);

using Coefficients = std::map<std::string, symbol::PCCoefficient>;

/// Label positions of a curve (node indices) for locating coefficient pieces.
symbol::LabelPositions label_positions(const DiscretizedCurve& curve);

DenseOperator assemble_operator(const symbol::OperatorExpr& expr, const DiscretizedCurve& curve,
                                const Coefficients& coefficients);

/// Smallest singular value; throws InputError on non-finite entries.
double min_singular_value(const DenseOperator& op);

enum class Trend { bounded_below, decaying, inconclusive };
const char* to_string(Trend trend);
Trend trend_from_string(const std::string& s);

struct FiniteSectionReport {
  std::vector<std::size_t> sizes;
  std::vector<double> min_svs;
  Trend trend = Trend::inconclusive;

  bool operator==(const FiniteSectionReport&) const = default;
};

/// Rule applied to the first and last entries of min_svs.
Trend classify_trend(std::span<const double> min_svs);

FiniteSectionReport finite_section_trend(const symbol::OperatorExpr& expr,
                                         const curve::CurveSpec& spec,
                                         const Coefficients& coefficients,
                                         const std::vector<std::size_t>& sizes);

/// (Mf)(t_j) = max over eps of the arclength-weighted mean of |f| over the
/// nodes with |tau_k - t_j| < eps.
std::vector<double> discrete_maximal(std::span<const Complex> f, const DiscretizedCurve& curve,
                                     std::span<const double> eps_grid);

}  // namespace leafspec::opnum
