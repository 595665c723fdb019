#pragma once

// Circular arcs, logarithmic double spirals and logarithmic leaves between
// two points, tested in the chart zeta = (z - z1) / (z - z2).

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace leafspec::leaf {

using Complex = std::complex<double>;

/// A complex number or the point at infinity.
struct ExtComplex {
  Complex value{};
  bool infinite = false;

  static ExtComplex finite(Complex z) { return {z, false}; }
  static ExtComplex infinity() { return {Complex{}, true}; }
};

struct Indicators {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = min(dm x, dp x), beta = max(dm x, dp x).
Indicators indicators(double delta_minus, double delta_plus, double x);

struct Leaf {
  Complex z1{0.0, 0.0};
  Complex z2{1.0, 0.0};
  double p = 2.0;
  double delta_minus = 0.0;
  double delta_plus = 0.0;

  /// Throws ParameterError if z1 == z2, p is outside (1, inf) or dm > dp.
  void validate() const;
};

/// M(zeta) = (z2 zeta - z1) / (zeta - 1); infinity maps to z2 and 1 to infinity.
ExtComplex moebius(Complex z1, Complex z2, ExtComplex zeta);

/// Inverse chart (z - z1) / (z - z2); z2 maps to infinity.
ExtComplex moebius_inverse(Complex z1, Complex z2, Complex z);

inline constexpr double kAngleTolerance = 1e-9;
inline constexpr double kStripSlack = 1e-12;

bool arc_contains(Complex z1, Complex z2, double p, Complex z);
bool spiral_contains(Complex z1, Complex z2, double p, double delta, Complex z);
bool leaf_contains(const Leaf& leaf, Complex z);

/// M(exp(2 pi i / p)), equidistant from z1 and z2.
Complex median_point(const Leaf& leaf);

struct BoundarySample {
  Complex z;
  std::string label;
};

/// Samples the boundary spirals of the leaf. Labels are "minus_z1",
/// "plus_z1", "minus_z2", "plus_z2" (or "spiral_z1", "spiral_z2" when the
/// indices coincide) plus one "median" sample. Each piece is ordered from the
/// median outwards with geometrically growing spacing; for large n they reach
/// deep towards z1 and z2.
std::vector<BoundarySample> leaf_boundary_sample(const Leaf& leaf, std::size_t n);

/// Maps a point (x, y) of the strip chart to the z plane.
Complex chart_to_plane(const Leaf& leaf, double x, double y);

}  // namespace leafspec::leaf
