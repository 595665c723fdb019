#pragma once

// Sampled Jordan curves, the Carleson constant, continuous argument branches
// about a point of the curve, and spirality index estimation.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace leafspec::curve {

using Complex = std::complex<double>;

/// Shape description of a closed curve. Model spirals place their
/// distinguished point "t" at `center` and spiral into it on the radius range
/// [radius * exp(-log_span), radius]; the curve is closed up by a half annulus
/// of outer radius 2 * radius.
struct CurveSpec {
  enum class Family { circle, ellipse, log_spiral, oscillating_spiral, polyline };

  Family family = Family::circle;
  Complex center{0.0, 0.0};
  double radius = 1.0;    // circle radius, ellipse semi-axis along x, spiral outer radius
  double radius_y = 1.0;  // ellipse semi-axis along y
  double delta = 0.0;     // log_spiral
  double delta_minus = 0.0;
  double delta_plus = 0.0;
  double log_span = 30.0;  // spiral models: decades (natural log) resolved near t
  std::vector<Complex> points;  // polyline vertices, closed implicitly
  bool counter_clockwise = true;
  /// Extra labelled points as fractions of the parametrization in [0, 1).
  /// The label "t" is always registered at fraction 0.
  std::vector<std::pair<std::string, double>> marks;

  static CurveSpec circle(double radius = 1.0, Complex center = {});
  static CurveSpec ellipse(double rx, double ry, Complex center = {});
  static CurveSpec log_spiral(double delta, double radius = 1.0, Complex center = {});
  static CurveSpec oscillating_spiral(double delta_minus, double delta_plus,
                                      double radius = 1.0, Complex center = {});
  static CurveSpec polyline(std::vector<Complex> vertices);
};

struct DiscretizedCurve {
  std::vector<Complex> nodes;
  std::vector<double> arclen_weights;
  std::map<std::string, std::size_t> distinguished_points;
  double total_length = 0.0;

  std::size_t size() const { return nodes.size(); }
  /// Index of a registered label; throws ReferenceError when unknown.
  std::size_t index_of(const std::string& label) const;
};

DiscretizedCurve build_curve(const CurveSpec& spec, std::size_t n);

/// Builds a curve from explicit nodes; weights are half the adjacent chord
/// lengths. Used for fixtures and user supplied samples.
DiscretizedCurve curve_from_nodes(std::vector<Complex> nodes,
                                  std::map<std::string, std::size_t> labels = {});

/// Winding number of the closed node polygon about `point`.
int winding_number(const DiscretizedCurve& curve, Complex point);

/// Largest distance between two nodes.
double diameter(const DiscretizedCurve& curve);

/// Throws GeometryError if two non-adjacent polygon edges intersect.
void check_simple(const DiscretizedCurve& curve);

/// sup over nodes t and radii R of |Gamma(t,R)| / R.
double carleson_constant(const DiscretizedCurve& curve, std::span<const double> radius_grid);

/// A continuous branch of arg(tau - t) along the curve with t removed.
struct ArgumentBranch {
  std::size_t t_index = 0;
  std::vector<double> values;  // indexed like curve.nodes
  std::vector<bool> valid;     // false at nodes coinciding with t
};

ArgumentBranch unwrap_argument(const DiscretizedCurve& curve, const std::string& t_label);

/// eta_t(tau_k) = exp(-arg(tau_k - t)); entries at invalid nodes are 0.
std::vector<double> eta(const DiscretizedCurve& curve, const std::string& t_label);

/// Shell half width relative to the shell radius.
inline constexpr double kShellHalfWidth = 0.05;

/// Range of the branch over the part of the polygonal curve lying in the
/// annulus r_lo <= |tau - t| <= r_hi. Clip points on the edges are included.
struct ShellRange {
  bool empty = true;
  double min_arg = 0.0;
  double max_arg = 0.0;
};

ShellRange shell_range(const DiscretizedCurve& curve, const ArgumentBranch& branch,
                       double r_lo, double r_hi);

/// log of the finite-R surrogate of (W_t^0 eta_t)(x): the max over R in
/// R_grid with both R and xR inside [min R_grid, max R_grid] of
/// log(max eta on shell(xR) / min eta on shell(R)). Throws ResolutionError if
/// no radius is usable.
double log_W0(const DiscretizedCurve& curve, const ArgumentBranch& branch, double x,
              std::span<const double> R_grid);

double W0(const DiscretizedCurve& curve, const std::string& t_label, double x,
          std::span<const double> R_grid);

struct SpiralityData {
  double delta_minus = 0.0;
  double delta_plus = 0.0;
  double fit_residual_minus = 0.0;
  double fit_residual_plus = 0.0;
  std::vector<double> x_grid;    // usable x values, small side first
  std::vector<double> W_values;  // W0 at x_grid
};

/// Noise band within which a crossed estimate (delta_minus > delta_plus) is
/// averaged instead of rejected.
inline constexpr double kSpiralityCrossingTolerance = 0.02;

SpiralityData spirality_indices(const DiscretizedCurve& curve, const std::string& t_label,
                                std::span<const double> x_grid_small,
                                std::span<const double> x_grid_large,
                                std::span<const double> R_grid);

SpiralityData spirality_indices_from_branch(const DiscretizedCurve& curve,
                                            const ArgumentBranch& branch,
                                            std::span<const double> x_grid_small,
                                            std::span<const double> x_grid_large,
                                            std::span<const double> R_grid);

/// Default grids: 16 radii from 1e-1 to 1e-4 times the curve diameter and
/// 8 log-spaced x values on [5e-3, 0.5] and [2, 2e2].
std::vector<double> default_R_grid(const DiscretizedCurve& curve);
std::vector<double> default_x_small();
std::vector<double> default_x_large();

/// Radii for carleson_constant: `count` geometric steps from a few cell
/// lengths up to the diameter, where closed curves reach their sup.
std::vector<double> default_carleson_grid(const DiscretizedCurve& curve, std::size_t count = 50);

/// Geometric grid of `count` values from `first` to `last` inclusive.
std::vector<double> geometric_grid(double first, double last, std::size_t count);

/// Slope of the oscillating model's log-radial argument profile at
/// s = log(|tau - t| / radius) <= 0. The model has arg(tau - t) = -g(s) with
/// g' equal to this slope; the slope alternates between delta_minus and
/// delta_plus on stretches whose length doubles as s -> -infinity.
double oscillating_slope(double s, double delta_minus, double delta_plus);

}  // namespace leafspec::curve
