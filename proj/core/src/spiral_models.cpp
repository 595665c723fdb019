#include <cmath>
#include <numbers>

#include "curve_internal.hpp"
#include "leafspec/errors.hpp"

namespace leafspec::curve {

namespace {

constexpr double kPi = std::numbers::pi;

// Sharpness of the switch between the two slopes of the oscillating model.
constexpr double kSwitchSharpness = 12.0;

double model_slope(const CurveSpec& spec, double s) {
  return spec.family == CurveSpec::Family::log_spiral
             ? spec.delta
             : oscillating_slope(s, spec.delta_minus, spec.delta_plus);
}

}  // namespace

double oscillating_slope(double s, double delta_minus, double delta_plus) {
  // Switch points sit at 1 - s = 1.5 * 2^j, so the stretches of constant
  // slope double in length towards the distinguished point.
  const double u = 1.0 - std::min(s, 0.0);
  const double phase = std::sin(kPi * std::log2(u / 1.5));
  const double mid = 0.5 * (delta_minus + delta_plus);
  const double amp = 0.5 * (delta_plus - delta_minus);
  return mid + amp * std::tanh(kSwitchSharpness * phase);
}

namespace detail {

std::vector<Complex> spiral_model_nodes(const CurveSpec& spec, std::size_t n) {
  if (spec.family == CurveSpec::Family::oscillating_spiral && spec.delta_minus > spec.delta_plus) {
    throw ParameterError("oscillating spiral needs delta_minus <= delta_plus");
  }
  const double dmax = std::max({std::abs(spec.delta), std::abs(spec.delta_minus),
                                std::abs(spec.delta_plus)});
  if (!std::isfinite(dmax)) throw ParameterError("spiral slopes must be finite");
  if (!(spec.log_span > 0.0) || spec.log_span > 600.0) {
    throw ParameterError("spiral log_span must lie in (0, 600]");
  }

  const std::size_t radial = std::max<std::size_t>(2, n / 64);
  const std::size_t arc = std::max<std::size_t>(8, n / 16);
  if (n < 1 + 2 * radial + arc + 2 * 16) throw ParameterError("too few nodes for a spiral model");
  const std::size_t arm_total = n - 1 - 2 * radial - arc;
  const std::size_t arm_a = arm_total / 2;
  const std::size_t arm_b = arm_total - arm_a;

  // Profile g on the arm grid s_j = -span + j * h (arm A resolution); arm B
  // reuses g by interpolation on its own uniform grid.
  const double span = spec.log_span;
  auto profile = [&](std::size_t count) {
    std::vector<double> s(count), g(count);
    const double h = span / static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j) s[j] = -span + h * static_cast<double>(j);
    // Integrate g' = slope backwards from g(0) = 0 with composite Simpson.
    g[count - 1] = 0.0;
    constexpr int kSub = 8;
    for (std::size_t j = count - 1; j > 0; --j) {
      const double a = s[j - 1];
      const double step = (s[j] - a) / kSub;
      double acc = model_slope(spec, a) + model_slope(spec, s[j]);
      for (int i = 1; i < kSub; ++i) {
        acc += (i % 2 ? 4.0 : 2.0) * model_slope(spec, a + step * i);
      }
      g[j - 1] = g[j] - acc * step / 3.0;
    }
    return std::pair{s, g};
  };

  std::vector<Complex> nodes;
  nodes.reserve(n);
  const Complex c = spec.center;
  const double R = spec.radius;
  nodes.push_back(c);

  // Arm A: inner to outer, arg(tau - t) = -g(s).
  {
    auto [s, g] = profile(arm_a);
    for (std::size_t j = 0; j < arm_a; ++j) nodes.push_back(c + R * std::exp(Complex(s[j], -g[j])));
  }
  // Radial segment outwards at angle 0, half circle of radius 2R, radial inwards.
  for (std::size_t j = 1; j <= radial; ++j) {
    nodes.push_back(c + R * (1.0 + static_cast<double>(j) / static_cast<double>(radial)));
  }
  for (std::size_t j = 1; j <= arc; ++j) {
    const double th = kPi * static_cast<double>(j) / static_cast<double>(arc + 1);
    nodes.push_back(c + 2.0 * R * Complex(std::cos(th), std::sin(th)));
  }
  for (std::size_t j = radial; j >= 1; --j) {
    nodes.push_back(c - R * (1.0 + static_cast<double>(j) / static_cast<double>(radial)));
  }
  // Arm B: outer to inner, rotated by pi.
  {
    auto [s, g] = profile(arm_b);
    for (std::size_t j = arm_b; j-- > 0;) {
      nodes.push_back(c + R * std::exp(Complex(s[j], kPi - g[j])));
    }
  }
  return nodes;
}

}  // namespace detail
}  // namespace leafspec::curve
