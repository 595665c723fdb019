#include "leafspec/curvekit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "curve_internal.hpp"
#include "leafspec/errors.hpp"
#include "leafspec/parallel.hpp"

namespace leafspec::curve {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGLNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double kGLWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

double ellipse_arc(double rx, double ry, double th0, double th1) {
  const double half = 0.5 * (th1 - th0);
  const double mid = 0.5 * (th1 + th0);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double th = mid + half * kGLNodes[i];
    sum += kGLWeights[i] * std::hypot(rx * std::sin(th), ry * std::cos(th));
  }
  return sum * half;
}

void validate_common(const CurveSpec& spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw ParameterError("curve radius must be positive and finite");
  }
  for (const auto& [label, fraction] : spec.marks) {
    if (label.empty()) throw ParameterError("curve mark labels must be nonempty");
    if (!(fraction >= 0.0 && fraction < 1.0)) {
      throw ParameterError("curve mark '" + label + "' must lie in [0, 1)");
    }
  }
}

std::vector<Complex> polyline_nodes(const std::vector<Complex>& vertices, std::size_t n) {
  const std::size_t m = vertices.size();
  if (m < 3) throw ParameterError("polyline needs at least 3 vertices");
  if (n < m) throw ParameterError("polyline needs n >= number of vertices");
  std::vector<double> len(m);
  for (std::size_t i = 0; i < m; ++i) {
    len[i] = std::abs(vertices[(i + 1) % m] - vertices[i]);
    if (len[i] == 0.0) throw GeometryError("polyline has repeated consecutive vertices");
  }
  const double total = std::accumulate(len.begin(), len.end(), 0.0);

  // Largest-remainder apportionment with at least one node per edge.
  std::vector<std::size_t> count(m);
  std::vector<std::pair<double, std::size_t>> remainder(m);
  std::size_t used = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = static_cast<double>(n) * len[i] / total;
    count[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact)));
    remainder[i] = {exact - std::floor(exact), i};
    used += count[i];
  }
  std::sort(remainder.begin(), remainder.end(),
            [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (std::size_t j = 0; used < n; j = (j + 1) % m) {
    ++count[remainder[j].second];
    ++used;
  }
  for (std::size_t j = 0; used > n; j = (j + 1) % m) {
    const std::size_t i = remainder[m - 1 - j].second;
    if (count[i] > 1) {
      --count[i];
      --used;
    }
  }

  std::vector<Complex> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < m; ++i) {
    const Complex a = vertices[i];
    const Complex b = vertices[(i + 1) % m];
    for (std::size_t j = 0; j < count[i]; ++j) {
      nodes.push_back(a + (b - a) * (static_cast<double>(j) / static_cast<double>(count[i])));
    }
  }
  return nodes;
}

double signed_area(const std::vector<Complex>& nodes) {
  double area = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Complex a = nodes[k];
    const Complex b = nodes[(k + 1) % nodes.size()];
    area += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * area;
}

// Reverses orientation while keeping node 0 in place.
template <typename T>
void reverse_tail(std::vector<T>& v) {
  if (v.size() > 2) std::reverse(v.begin() + 1, v.end());
}

double orient(Complex a, Complex b, Complex c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

CurveSpec CurveSpec::circle(double radius, Complex center) {
  CurveSpec s;
  s.family = Family::circle;
  s.radius = radius;
  s.center = center;
  return s;
}

CurveSpec CurveSpec::ellipse(double rx, double ry, Complex center) {
  CurveSpec s;
  s.family = Family::ellipse;
  s.radius = rx;
  s.radius_y = ry;
  s.center = center;
  return s;
}

CurveSpec CurveSpec::log_spiral(double delta, double radius, Complex center) {
  CurveSpec s;
  s.family = Family::log_spiral;
  s.delta = delta;
  s.radius = radius;
  s.center = center;
  return s;
}

CurveSpec CurveSpec::oscillating_spiral(double delta_minus, double delta_plus, double radius,
                                        Complex center) {
  CurveSpec s;
  s.family = Family::oscillating_spiral;
  s.delta_minus = delta_minus;
  s.delta_plus = delta_plus;
  s.radius = radius;
  s.center = center;
  return s;
}

CurveSpec CurveSpec::polyline(std::vector<Complex> vertices) {
  CurveSpec s;
  s.family = Family::polyline;
  s.points = std::move(vertices);
  return s;
}

std::size_t DiscretizedCurve::index_of(const std::string& label) const {
  auto it = distinguished_points.find(label);
  if (it == distinguished_points.end()) {
    throw ReferenceError("unknown curve label '" + label + "'");
  }
  return it->second;
}

DiscretizedCurve build_curve(const CurveSpec& spec, std::size_t n) {
  validate_common(spec);
  const bool spiral = spec.family == CurveSpec::Family::log_spiral ||
                      spec.family == CurveSpec::Family::oscillating_spiral;
  if (spiral ? n < 64 : n < 4) {
    throw ParameterError(spiral ? "spiral models need n >= 64" : "curves need n >= 4");
  }

  std::vector<Complex> nodes;
  std::vector<double> edge_len;  // edge_len[k]: length from node k to node k+1
  switch (spec.family) {
    case CurveSpec::Family::circle: {
      nodes.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        nodes[k] = spec.center + spec.radius * Complex(std::cos(th), std::sin(th));
      }
      if (n % 4 == 0) {
        // Exact quadrant points, so the n = 4 curve is {1, i, -1, -i} on the nose.
        const std::size_t q = n / 4;
        nodes[q] = spec.center + Complex(0.0, spec.radius);
        nodes[2 * q] = spec.center + Complex(-spec.radius, 0.0);
        nodes[3 * q] = spec.center + Complex(0.0, -spec.radius);
      }
      edge_len.assign(n, 2.0 * kPi * spec.radius / static_cast<double>(n));
      break;
    }
    case CurveSpec::Family::ellipse: {
      if (!(spec.radius_y > 0.0)) throw ParameterError("ellipse semi-axes must be positive");
      nodes.resize(n);
      edge_len.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double th0 = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        const double th1 = 2.0 * kPi * static_cast<double>(k + 1) / static_cast<double>(n);
        nodes[k] = spec.center + Complex(spec.radius * std::cos(th0), spec.radius_y * std::sin(th0));
        edge_len[k] = ellipse_arc(spec.radius, spec.radius_y, th0, th1);
      }
      break;
    }
    case CurveSpec::Family::log_spiral:
    case CurveSpec::Family::oscillating_spiral: {
      nodes = detail::spiral_model_nodes(spec, n);
      break;
    }
    case CurveSpec::Family::polyline: {
      nodes = polyline_nodes(spec.points, n);
      break;
    }
  }

  const bool analytic_lengths = !edge_len.empty();
  if (!analytic_lengths) {
    edge_len.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      edge_len[k] = std::abs(nodes[(k + 1) % nodes.size()] - nodes[k]);
    }
  }

  const bool ccw = signed_area(nodes) > 0.0;
  if (ccw != spec.counter_clockwise) {
    reverse_tail(nodes);
    // Edge k of the reversed polygon joins new nodes k and k+1, i.e. old
    // nodes n-k and n-k-1: old edge n-k-1.
    std::vector<double> reversed(edge_len.size());
    const std::size_t m = edge_len.size();
    for (std::size_t k = 0; k < m; ++k) reversed[k] = edge_len[(2 * m - k - 1) % m];
    edge_len = std::move(reversed);
  }

  DiscretizedCurve curve;
  curve.nodes = std::move(nodes);
  const std::size_t m = curve.nodes.size();
  curve.arclen_weights.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    curve.arclen_weights[k] = 0.5 * (edge_len[(k + m - 1) % m] + edge_len[k]);
  }
  curve.total_length = std::accumulate(edge_len.begin(), edge_len.end(), 0.0);
  curve.distinguished_points["t"] = 0;
  for (const auto& [label, fraction] : spec.marks) {
    const auto idx = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m))) % m;
    curve.distinguished_points[label] = idx;
  }

  check_simple(curve);
  return curve;
}

DiscretizedCurve curve_from_nodes(std::vector<Complex> nodes,
                                  std::map<std::string, std::size_t> labels) {
  if (nodes.size() < 3) throw ParameterError("a closed curve needs at least 3 nodes");
  for (const auto& z : nodes) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InputError("curve nodes must be finite");
    }
  }
  DiscretizedCurve curve;
  curve.nodes = std::move(nodes);
  const std::size_t m = curve.nodes.size();
  std::vector<double> edge_len(m);
  for (std::size_t k = 0; k < m; ++k) edge_len[k] = std::abs(curve.nodes[(k + 1) % m] - curve.nodes[k]);
  curve.arclen_weights.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    curve.arclen_weights[k] = 0.5 * (edge_len[(k + m - 1) % m] + edge_len[k]);
  }
  curve.total_length = std::accumulate(edge_len.begin(), edge_len.end(), 0.0);
  curve.distinguished_points = std::move(labels);
  curve.distinguished_points.emplace("t", 0);
  for (const auto& [label, idx] : curve.distinguished_points) {
    if (idx >= m) throw ParameterError("label '" + label + "' is out of range");
  }
  return curve;
}

int winding_number(const DiscretizedCurve& curve, Complex point) {
  double total = 0.0;
  const std::size_t m = curve.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Complex a = curve.nodes[k] - point;
    const Complex b = curve.nodes[(k + 1) % m] - point;
    if (a == Complex{} || b == Complex{}) throw GeometryError("point lies on the curve");
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double diameter(const DiscretizedCurve& curve) {
  double best = 0.0;
  const std::size_t m = curve.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      best = std::max(best, std::norm(curve.nodes[i] - curve.nodes[j]));
    }
  }
  return std::sqrt(best);
}

void check_simple(const DiscretizedCurve& curve) {
  const std::size_t m = curve.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (curve.nodes[i] == curve.nodes[(i + 1) % m]) {
      throw GeometryError("curve has coincident consecutive nodes at index " + std::to_string(i));
    }
  }
  if (m < 4) return;
  for (std::size_t i = 0; i < m; ++i) {
    const Complex a = curve.nodes[i];
    const Complex b = curve.nodes[(i + 1) % m];
    const double ax0 = std::min(a.real(), b.real()), ax1 = std::max(a.real(), b.real());
    const double ay0 = std::min(a.imag(), b.imag()), ay1 = std::max(a.imag(), b.imag());
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // edges sharing node 0
      const Complex c = curve.nodes[j];
      const Complex d = curve.nodes[(j + 1) % m];
      if (std::max(c.real(), d.real()) < ax0 || std::min(c.real(), d.real()) > ax1 ||
          std::max(c.imag(), d.imag()) < ay0 || std::min(c.imag(), d.imag()) > ay1) {
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        throw GeometryError("curve edges " + std::to_string(i) + " and " + std::to_string(j) +
                            " intersect");
      }
    }
  }
}

double carleson_constant(const DiscretizedCurve& curve, std::span<const double> radius_grid) {
  if (radius_grid.empty()) throw ParameterError("carleson_constant needs a nonempty radius grid");
  for (double r : radius_grid) {
    if (!(r > 0.0)) throw ParameterError("radius grid entries must be positive");
  }
  const std::size_t m = curve.size();
  std::vector<double> best(m, 0.0);
  parallel_for(m, [&](std::size_t j) {
    std::vector<std::pair<double, double>> dist(m);
    for (std::size_t k = 0; k < m; ++k) {
      dist[k] = {std::abs(curve.nodes[k] - curve.nodes[j]), curve.arclen_weights[k]};
    }
    std::sort(dist.begin(), dist.end());
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) prefix[k + 1] = prefix[k] + dist[k].second;
    double local = 0.0;
    for (double R : radius_grid) {
      // Cells strictly inside the open ball.
      auto it = std::lower_bound(dist.begin(), dist.end(), std::pair<double, double>{R, -1.0});
      const auto count = static_cast<std::size_t>(it - dist.begin());
      local = std::max(local, prefix[count] / R);
    }
    best[j] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

ArgumentBranch unwrap_argument(const DiscretizedCurve& curve, const std::string& t_label) {
  ArgumentBranch branch;
  branch.t_index = curve.index_of(t_label);
  const std::size_t m = curve.size();
  const Complex t = curve.nodes[branch.t_index];
  branch.values.assign(m, 0.0);
  branch.valid.assign(m, false);

  bool started = false;
  Complex previous{};
  double previous_arg = 0.0;
  for (std::size_t step = 1; step < m; ++step) {
    const std::size_t k = (branch.t_index + step) % m;
    const Complex d = curve.nodes[k] - t;
    if (d == Complex{}) continue;
    const double value = started ? previous_arg + std::arg(d / previous) : std::arg(d);
    branch.values[k] = value;
    branch.valid[k] = true;
    previous = d;
    previous_arg = value;
    started = true;
  }
  if (!started) throw GeometryError("all nodes coincide with the distinguished point");
  return branch;
}

std::vector<double> eta(const DiscretizedCurve& curve, const std::string& t_label) {
  const ArgumentBranch branch = unwrap_argument(curve, t_label);
  std::vector<double> out(curve.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (branch.valid[k]) out[k] = std::exp(-branch.values[k]);
  }
  return out;
}

std::vector<double> geometric_grid(double first, double last, std::size_t count) {
  if (count < 2 || !(first > 0.0) || !(last > 0.0)) {
    throw ParameterError("geometric grid needs count >= 2 and positive endpoints");
  }
  std::vector<double> grid(count);
  const double a = std::log(first);
  const double b = std::log(last);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = first;
  grid.back() = last;
  return grid;
}

std::vector<double> default_R_grid(const DiscretizedCurve& curve) {
  const double d = diameter(curve);
  return geometric_grid(1e-1 * d, 1e-4 * d, 16);
}

std::vector<double> default_carleson_grid(const DiscretizedCurve& curve, std::size_t count) {
  const double d = diameter(curve);
  const double cell = *std::max_element(curve.arclen_weights.begin(), curve.arclen_weights.end());
  // Balls smaller than a few cells only measure the sampling.
  const double first = std::min(std::max(1e-2 * d, 4.0 * cell), d);
  return geometric_grid(first, d, count);
}

std::vector<double> default_x_small() { return geometric_grid(5e-3, 0.5, 8); }
std::vector<double> default_x_large() { return geometric_grid(2.0, 2e2, 8); }

}  // namespace leafspec::curve
