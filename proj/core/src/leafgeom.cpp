#include "leafspec/leafgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leafspec/errors.hpp"

namespace leafspec::leaf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance of `angle` to the nearest point of target + 2 pi Z.
double angle_defect(double angle, double target) {
  return std::abs(std::remainder(angle - target, kTwoPi));
}

}  // namespace

Indicators indicators(double delta_minus, double delta_plus, double x) {
  const double a = delta_minus * x;
  const double b = delta_plus * x;
  return {std::min(a, b), std::max(a, b)};
}

void Leaf::validate() const {
  if (!std::isfinite(z1.real()) || !std::isfinite(z1.imag()) || !std::isfinite(z2.real()) ||
      !std::isfinite(z2.imag())) {
    throw ParameterError("leaf endpoints must be finite");
  }
  if (z1 == z2) throw ParameterError("leaf endpoints must differ");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("leaf exponent must lie in (1, inf)");
  if (!std::isfinite(delta_minus) || !std::isfinite(delta_plus) || delta_minus > delta_plus) {
    throw ParameterError("leaf needs finite delta_minus <= delta_plus");
  }
}

ExtComplex moebius(Complex z1, Complex z2, ExtComplex zeta) {
  if (z1 == z2) throw ParameterError("moebius needs z1 != z2");
  if (zeta.infinite) return ExtComplex::finite(z2);
  if (zeta.value == Complex(1.0, 0.0)) return ExtComplex::infinity();
  return ExtComplex::finite((z2 * zeta.value - z1) / (zeta.value - 1.0));
}

ExtComplex moebius_inverse(Complex z1, Complex z2, Complex z) {
  if (z1 == z2) throw ParameterError("moebius needs z1 != z2");
  if (z == z2) return ExtComplex::infinity();
  return ExtComplex::finite((z - z1) / (z - z2));
}

bool arc_contains(Complex z1, Complex z2, double p, Complex z) {
  if (z == z1 || z == z2) return true;
  const Complex zeta = (z - z1) / (z - z2);
  return angle_defect(std::arg(zeta), kTwoPi / p) <= kAngleTolerance;
}

bool spiral_contains(Complex z1, Complex z2, double p, double delta, Complex z) {
  if (z == z1 || z == z2) return true;
  const Complex zeta = (z - z1) / (z - z2);
  return angle_defect(std::arg(zeta) - delta * std::log(std::abs(zeta)), kTwoPi / p) <=
         kAngleTolerance;
}

bool leaf_contains(const Leaf& leaf, Complex z) {
  if (z == leaf.z1 || z == leaf.z2) return true;
  const Complex zeta = (z - leaf.z1) / (z - leaf.z2);
  const double x = std::log(std::abs(zeta)) / kTwoPi;
  const double y0 = std::arg(zeta) / kTwoPi;
  const Indicators ind = indicators(leaf.delta_minus, leaf.delta_plus, x);
  const double lo = 1.0 / leaf.p + ind.alpha;
  const double hi = 1.0 / leaf.p + ind.beta;
  // Smallest admissible shift; it is the only candidate that can fit below hi.
  const double k = std::ceil(lo - kStripSlack - y0);
  return y0 + k <= hi + kStripSlack;
}

Complex median_point(const Leaf& leaf) {
  const Complex e = std::polar(1.0, kTwoPi / leaf.p);
  return moebius(leaf.z1, leaf.z2, ExtComplex::finite(e)).value;
}

Complex chart_to_plane(const Leaf& leaf, double x, double y) {
  const Complex zeta = std::exp(Complex(kTwoPi * x, kTwoPi * y));
  return (leaf.z2 * zeta - leaf.z1) / (zeta - 1.0);
}

std::vector<BoundarySample> leaf_boundary_sample(const Leaf& leaf, std::size_t n) {
  leaf.validate();
  if (n < 64) throw ParameterError("leaf_boundary_sample needs n >= 64");

  const bool degenerate = leaf.delta_minus == leaf.delta_plus;
  struct Piece {
    double delta;
    double side;
    const char* label;
  };
  std::vector<Piece> spec;
  if (degenerate) {
    spec = {{leaf.delta_minus, -1.0, "spiral_z1"}, {leaf.delta_minus, 1.0, "spiral_z2"}};
  } else {
    spec = {{leaf.delta_minus, -1.0, "minus_z1"},
            {leaf.delta_plus, -1.0, "plus_z1"},
            {leaf.delta_minus, 1.0, "minus_z2"},
            {leaf.delta_plus, 1.0, "plus_z2"}};
  }
  const std::size_t per_piece = (n - 1) / spec.size();

  // Every piece is sampled at the same chart distances u from the median.
  // Samples on opposite sides of the median must stay further apart than a
  // few sampling steps, which bounds the growth ratio of u.
  auto direction = [](const Piece& piece) {
    return Complex(piece.side, piece.side * piece.delta) / std::sqrt(1.0 + piece.delta * piece.delta);
  };
  double gap = 2.0;
  for (const Piece& a : spec) {
    for (const Piece& b : spec) {
      if (a.side < 0.0 && b.side > 0.0) gap = std::min(gap, std::abs(direction(a) - direction(b)));
    }
  }
  const double ratio_cap = 1.0 + std::min(0.2, gap / 4.0);
  const double x_max = 1.2;
  const double flattest = std::min(std::abs(leaf.delta_minus), std::abs(leaf.delta_plus));
  const double u_max = x_max * std::sqrt(1.0 + flattest * flattest);
  const double steps = static_cast<double>(per_piece - 1);
  const double u_min = std::clamp(u_max * std::pow(ratio_cap, -steps), 1e-6, 1e-3);
  const double ratio = std::min(ratio_cap, std::pow(u_max / u_min, 1.0 / steps));

  std::vector<BoundarySample> out;
  out.reserve(spec.size() * per_piece + 1);
  out.push_back({median_point(leaf), "median"});
  for (const Piece& piece : spec) {
    const double norm = std::sqrt(1.0 + piece.delta * piece.delta);
    for (std::size_t i = 0; i < per_piece; ++i) {
      const double x = piece.side * u_min * std::pow(ratio, static_cast<double>(i)) / norm;
      out.push_back({chart_to_plane(leaf, x, 1.0 / leaf.p + piece.delta * x), piece.label});
    }
  }
  return out;
}

}  // namespace leafspec::leaf
