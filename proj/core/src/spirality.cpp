#include <algorithm>
#include <cmath>
#include <limits>

#include "leafspec/curvekit.hpp"
#include "leafspec/errors.hpp"

namespace leafspec::curve {

namespace {

struct Accumulator {
  ShellRange range;
  void add(double value) {
    if (range.empty) {
      range = {false, value, value};
    } else {
      range.min_arg = std::min(range.min_arg, value);
      range.max_arg = std::max(range.max_arg, value);
    }
  }
};

// Roots in [0, 1] of |a + s d|^2 = r^2.
int edge_circle_roots(Complex a, Complex d, double r, double out[2]) {
  const double qa = std::norm(d);
  const double qb = 2.0 * (a.real() * d.real() + a.imag() * d.imag());
  const double qc = std::norm(a) - r * r;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (qa == 0.0 || disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  double roots[2] = {q / qa, q != 0.0 ? qc / q : 0.0};
  int count = 0;
  for (double s : roots) {
    if (s >= 0.0 && s <= 1.0) out[count++] = s;
  }
  return count;
}

struct LogFit {
  double slope = 0.0;
  double rms = 0.0;
};

LogFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LogFit fit;
  fit.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

ShellRange shell_range(const DiscretizedCurve& curve, const ArgumentBranch& branch, double r_lo,
                       double r_hi) {
  const std::size_t m = curve.size();
  const Complex t = curve.nodes[branch.t_index];
  const double lo = r_lo * (1.0 - 1e-12);
  const double hi = r_hi * (1.0 + 1e-12);
  Accumulator acc;

  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t k1 = (k + 1) % m;
    const Complex a = curve.nodes[k] - t;
    const Complex b = curve.nodes[k1] - t;
    const bool va = branch.valid[k];
    const bool vb = branch.valid[k1];
    if (!va && !vb) continue;
    if (!va || !vb) {
      // Edge from t: the ray has a constant argument; it meets the annulus
      // iff the far endpoint reaches r_lo.
      const std::size_t far = va ? k : k1;
      if (std::abs(curve.nodes[far] - t) >= lo) acc.add(branch.values[far]);
      continue;
    }
    const Complex d = b - a;
    double candidates[6] = {0.0, 1.0};
    int count = 2;
    count += edge_circle_roots(a, d, r_lo, candidates + count);
    count += edge_circle_roots(a, d, r_hi, candidates + count);
    for (int i = 0; i < count; ++i) {
      const double s = candidates[i];
      const Complex p = a + s * d;
      const double r = std::abs(p);
      if (r < lo || r > hi) continue;
      acc.add(branch.values[k] + std::arg(p / a));
    }
  }
  return acc.range;
}

double log_W0(const DiscretizedCurve& curve, const ArgumentBranch& branch, double x,
              std::span<const double> R_grid) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("W0 needs x > 0");
  if (R_grid.empty()) throw ParameterError("W0 needs a nonempty R grid");
  const auto [gmin, gmax] = std::minmax_element(R_grid.begin(), R_grid.end());
  if (!(*gmin > 0.0)) throw ParameterError("R grid entries must be positive");
  const double lo_scale = *gmin * (1.0 - 1e-12);
  const double hi_scale = *gmax * (1.0 + 1e-12);
  const double h = kShellHalfWidth;

  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (double R : R_grid) {
    const double xR = x * R;
    if (xR < lo_scale || xR > hi_scale) continue;
    const ShellRange near = shell_range(curve, branch, xR * (1.0 - h), xR * (1.0 + h));
    if (near.empty) continue;
    const ShellRange base = shell_range(curve, branch, R * (1.0 - h), R * (1.0 + h));
    if (base.empty) continue;
    // max eta = exp(-min arg), min eta = exp(-max arg).
    best = std::max(best, base.max_arg - near.min_arg);
    any = true;
  }
  if (!any) {
    throw ResolutionError("no radius in the R grid resolves W0 at x = " + std::to_string(x));
  }
  return best;
}

double W0(const DiscretizedCurve& curve, const std::string& t_label, double x,
          std::span<const double> R_grid) {
  const ArgumentBranch branch = unwrap_argument(curve, t_label);
  return std::exp(log_W0(curve, branch, x, R_grid));
}

SpiralityData spirality_indices_from_branch(const DiscretizedCurve& curve,
                                            const ArgumentBranch& branch,
                                            std::span<const double> x_grid_small,
                                            std::span<const double> x_grid_large,
                                            std::span<const double> R_grid) {
  for (double x : x_grid_small) {
    if (!(x > 0.0 && x < 1.0)) throw ParameterError("x_grid_small must lie in (0, 1)");
  }
  for (double x : x_grid_large) {
    if (!(x > 1.0) || !std::isfinite(x)) throw ParameterError("x_grid_large must lie in (1, inf)");
  }

  auto spans_two_decades = [](std::span<const double> grid) {
    if (grid.empty()) return false;
    const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    return *hi / *lo >= 100.0 * (1.0 - 1e-9);
  };
  if (!spans_two_decades(x_grid_small) || !spans_two_decades(x_grid_large)) {
    throw ParameterError("x grids must each span at least two decades");
  }

  SpiralityData data;
  auto fit_side = [&](std::span<const double> grid, const char* side) {
    std::vector<double> lx, lw;
    for (double x : grid) {
      try {
        const double lw_x = log_W0(curve, branch, x, R_grid);
        lx.push_back(std::log(x));
        lw.push_back(lw_x);
        data.x_grid.push_back(x);
        data.W_values.push_back(std::exp(lw_x));
      } catch (const ResolutionError&) {
        // unresolved x values are dropped
      }
    }
    if (lx.size() < 3) {
      throw ResolutionError(std::string("fewer than 3 usable x values on the ") + side + " side");
    }
    return least_squares(lx, lw);
  };

  const LogFit lower = fit_side(x_grid_small, "small-x");
  const LogFit upper = fit_side(x_grid_large, "large-x");
  data.delta_minus = lower.slope;
  data.delta_plus = upper.slope;
  data.fit_residual_minus = lower.rms;
  data.fit_residual_plus = upper.rms;

  if (data.delta_minus > data.delta_plus) {
    if (data.delta_minus - data.delta_plus < kSpiralityCrossingTolerance) {
      const double mean = 0.5 * (data.delta_minus + data.delta_plus);
      data.delta_minus = mean;
      data.delta_plus = mean;
    } else {
      throw ResolutionError("estimated spirality indices cross: delta_minus = " +
                            std::to_string(data.delta_minus) +
                            " > delta_plus = " + std::to_string(data.delta_plus));
    }
  }
  return data;
}

SpiralityData spirality_indices(const DiscretizedCurve& curve, const std::string& t_label,
                                std::span<const double> x_grid_small,
                                std::span<const double> x_grid_large,
                                std::span<const double> R_grid) {
  const ArgumentBranch branch = unwrap_argument(curve, t_label);
  return spirality_indices_from_branch(curve, branch, x_grid_small, x_grid_large, R_grid);
}

}  // namespace leafspec::curve
