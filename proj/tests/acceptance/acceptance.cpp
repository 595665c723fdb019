// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <map>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leafspec/curvekit.hpp"
#include "leafspec/errors.hpp"
#include "leafspec/expspace.hpp"
#include "leafspec/fredholm.hpp"
#include "leafspec/leafgeom.hpp"
#include "leafspec/opnum.hpp"
#include "leafspec/symcalc.hpp"

using namespace leafspec;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Complex random_point(std::mt19937_64& rng, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  return {u(rng), u(rng)};
}

Complex random_nonzero(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.1, 5.0), a(-kPi, kPi);
  return std::polar(r(rng), a(rng));
}

struct RandomJump {
  double p;
  double dm;
  double dp;
  Complex am;
  Complex ap;
};

RandomJump random_jump(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pd(1.1, 10.0), dd(-3.0, 3.0);
  RandomJump j{pd(rng), dd(rng), dd(rng), random_nonzero(rng), random_nonzero(rng)};
  if (j.dm > j.dp) std::swap(j.dm, j.dp);
  return j;
}

// 1. Degenerate leaves are arcs or double spirals.
Outcome leaf_degeneracy() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pd(1.1, 10.0);
  int arc_bad = 0, spiral_bad = 0, arc_inside = 0;
  for (int i = 0; i < 10000; ++i) {
    const Complex z1 = random_point(rng, 1.0), z2 = random_point(rng, 1.0) + 1.5;
    const double p = pd(rng);
    const Complex z = random_point(rng, 3.0);
    const bool in = leaf::leaf_contains({z1, z2, p, 0.0, 0.0}, z);
    arc_inside += in;
    arc_bad += in != leaf::arc_contains(z1, z2, p, z);
  }
  // Random points almost never hit the arc; also test points on it, kept
  // to |x| <= 0.5 where constructing them costs less than the strip slack.
  for (int i = 0; i < 10000; ++i) {
    const leaf::Leaf L{random_point(rng, 1.0), random_point(rng, 1.0) + 1.5, pd(rng), 0.0, 0.0};
    std::uniform_real_distribution<double> xd(-0.5, 0.5);
    const Complex z = leaf::chart_to_plane(L, xd(rng), 1.0 / L.p);
    arc_bad += leaf::leaf_contains(L, z) != leaf::arc_contains(L.z1, L.z2, L.p, z);
    arc_inside += leaf::leaf_contains(L, z);
  }
  for (double d : {-2.0, -0.5, 1.0}) {
    for (int i = 0; i < 10000; ++i) {
      const leaf::Leaf L{random_point(rng, 1.0), random_point(rng, 1.0) + 1.5, pd(rng), d, d};
      Complex z = random_point(rng, 3.0);
      if (i % 2 == 1) {
        std::uniform_real_distribution<double> xd(-0.5, 0.5);
        const double x = xd(rng);
        z = leaf::chart_to_plane(L, x, 1.0 / L.p + d * x);
      }
      spiral_bad += leaf::leaf_contains(L, z) != leaf::spiral_contains(L.z1, L.z2, L.p, d, z);
    }
  }
  const double s = seconds_since(t0);
  return {arc_bad == 0 && spiral_bad == 0 && arc_inside >= 9000 && s < 5.0,
          "arc disagreements " + std::to_string(arc_bad) + ", spiral disagreements " +
              std::to_string(spiral_bad) + ", on-arc hits " + std::to_string(arc_inside) + ", " +
              fmt("%.2f s", s)};
}

// Connected components of the proximity graph of a boundary sample.
int components(const std::vector<leaf::BoundarySample>& s, bool drop_median) {
  const std::size_t m = s.size();
  // Local step: the larger gap to a chain neighbour along the same piece.
  // Each piece hangs off the median unless the median is removed.
  std::vector<double> step(m, 0.0);
  std::map<std::string, std::size_t> last;
  for (std::size_t i = 1; i < m; ++i) {
    const auto it = last.find(s[i].label);
    const bool head = it == last.end();
    const std::size_t prev = head ? 0 : it->second;
    last[s[i].label] = i;
    if (head && drop_median) continue;
    const double d = std::abs(s[i].z - s[prev].z);
    step[i] = std::max(step[i], d);
    step[prev] = std::max(step[prev], d);
  }
  const std::size_t first = drop_median ? 1 : 0;
  std::vector<int> comp(m, -1);
  int count = 0;
  for (std::size_t start = first; start < m; ++start) {
    if (comp[start] >= 0) continue;
    std::vector<std::size_t> stack{start};
    comp[start] = count;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = first; v < m; ++v) {
        if (comp[v] < 0 && std::abs(s[u].z - s[v].z) < 2.0 * std::min(step[u], step[v])) {
          comp[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return count;
}

// 2. The median point is equidistant and separates the boundary.
Outcome median_separation() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> pd(1.1, 10.0), dd(-3.0, 3.0);
  double worst = 0.0;
  int not_separated = 0, not_connected = 0;
  for (int i = 0; i < 100; ++i) {
    double dm = dd(rng), dp = dd(rng);
    if (dm > dp) std::swap(dm, dp);
    const leaf::Leaf L{random_point(rng, 1.0), random_point(rng, 1.0) + 1.5, pd(rng), dm, dp};
    const Complex m = leaf::median_point(L);
    worst = std::max(worst, std::abs(std::abs(m - L.z1) - std::abs(m - L.z2)));
    const auto s = leaf::leaf_boundary_sample(L, 128);
    not_connected += components(s, false) != 1;
    not_separated += components(s, true) < 2;
  }
  return {worst <= 1e-12 && not_separated == 0 && not_connected == 0,
          fmt("max ||m-z1|-|m-z2|| %.2e", worst) + ", unseparated " + std::to_string(not_separated) +
              ", disconnected before removal " + std::to_string(not_connected)};
}

// 3. Scalar criterion against the root-membership test of the symbol determinant.
Outcome criterion_symbol_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(303);
  int disagree = 0, blocked = 0;
  for (int i = 0; i < 1000; ++i) {
    const RandomJump j = random_jump(rng);
    symbol::SymbolContext ctx;
    ctx.coefficients["a"] = symbol::PCCoefficient(
        1, {{"s", symbol::Matrix::Constant(1, 1, j.am)}, {"t", symbol::Matrix::Constant(1, 1, j.ap)}});
    ctx.positions = {{"s", -1.0}, {"t", 0.0}};
    // The jump at s is trivial on the criterion side: give it the same local data.
    ctx.local["t"] = {j.p, j.dm, j.dp};
    ctx.local["s"] = {j.p, j.dm, j.dp};
    const bool scalar = fredholm::is_fredholm_scalar({{"t", j.am, j.ap, j.p, j.dm, j.dp},
                                                      {"s", j.ap, j.am, j.p, j.dm, j.dp}})
                            .fredholm;
    const auto v = symbol::bundle_fredholm_test(symbol::OperatorExpr::aP_plus_Q("a"), ctx, 256);
    disagree += scalar != v.fredholm || !v.exact;
    blocked += !scalar;
  }
  const double s = seconds_since(t0);
  return {disagree == 0 && s < 10.0, std::to_string(disagree) + " disagreements in 1000 (" +
                                          std::to_string(blocked) + " not Fredholm), " +
                                          fmt("%.2f s", s)};
}

// 4. With delta = 0 the criterion is the classical one.
Outcome classical_reduction() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> pd(1.1, 10.0);
  int disagree = 0, blocked = 0;
  for (int i = 0; i < 1000; ++i) {
    Complex am = random_nonzero(rng), ap = random_nonzero(rng);
    double p = pd(rng);
    if (i % 5 == 0) {
      // ratio -1 at p = 2 lands on an integer.
      p = 2.0;
      ap = -am;
    }
    const double v = 1.0 / p - std::arg(am / ap) / (2.0 * kPi);
    const bool classical = v != std::floor(v);
    blocked += !classical;
    disagree += fredholm::is_fredholm_scalar({{"t", am, ap, p, 0.0, 0.0}}).fredholm != classical;
  }
  return {disagree == 0,
          std::to_string(disagree) + " disagreements in 1000 (" + std::to_string(blocked) + " blocked)"};
}

// 5. Massiveness produced by the curve.
Outcome curve_massiveness() {
  const double e = std::exp(1.0);
  const fredholm::JumpDatum spiral{"t", e, 1.0, 2.0, -2.0 * kPi, 2.0 * kPi};
  const fredholm::JumpDatum smooth{"t", e, 1.0, 2.0, 0.0, 0.0};
  const auto a = fredholm::criterion_interval(spiral);
  const auto b = fredholm::criterion_interval(smooth);
  const double err = std::max({std::abs(a.low + 0.5), std::abs(a.high - 1.5), std::abs(b.low - 0.5),
                               std::abs(b.high - 0.5)});
  const bool va = fredholm::is_fredholm_scalar({spiral}).fredholm;
  const bool vb = fredholm::is_fredholm_scalar({smooth}).fredholm;
  std::ostringstream os;
  os << "spiral [" << a.low << ", " << a.high << "] " << (va ? "Fredholm" : "not Fredholm")
     << ", smooth [" << b.low << ", " << b.high << "] " << (vb ? "Fredholm" : "not Fredholm")
     << fmt(", max endpoint error %.1e", err);
  return {err <= 4.0 * std::numeric_limits<double>::epsilon() && !va && vb, os.str()};
}

// 6. Spirality estimation on analytic models.
Outcome spirality_estimation() {
  struct Case {
    const char* name;
    curve::CurveSpec spec;
    double expect_minus, expect_plus, tol;
    bool deep_grid;
  };
  const std::vector<Case> cases = {
      {"circle", curve::CurveSpec::circle(), 0.0, 0.0, 0.05, false},
      {"log spiral -1", curve::CurveSpec::log_spiral(-1.0), -1.0, -1.0, 0.05, false},
      {"log spiral 0.5", curve::CurveSpec::log_spiral(0.5), 0.5, 0.5, 0.05, false},
      {"log spiral 2", curve::CurveSpec::log_spiral(2.0), 2.0, 2.0, 0.05, false},
      {"oscillating (-1, 1)", curve::CurveSpec::oscillating_spiral(-1.0, 1.0), -1.0, 1.0, 0.1, true},
  };
  bool ok = true;
  std::ostringstream os;
  for (const Case& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto dc = curve::build_curve(c.spec, 4096);
    const auto R = c.deep_grid ? curve::geometric_grid(std::exp(-2.0), std::exp(-28.0), 64)
                               : curve::default_R_grid(dc);
    try {
      const auto d = curve::spirality_indices(dc, "t", curve::default_x_small(),
                                              curve::default_x_large(), R);
      const double s = seconds_since(t0);
      const bool good = std::abs(d.delta_minus - c.expect_minus) <= c.tol &&
                        std::abs(d.delta_plus - c.expect_plus) <= c.tol && s < 10.0;
      ok = ok && good;
      os << c.name << fmt(" (%.3f", d.delta_minus) << fmt(", %.3f", d.delta_plus)
         << fmt(", %.2f s)", s) << (good ? "" : " out of tolerance") << "; ";
    } catch (const Error& err) {
      ok = false;
      os << c.name << " failed: " << err.what() << "; ";
    }
  }
  return {ok, os.str()};
}

// 7. Carleson constant of the circle is pi.
Outcome carleson_circle() {
  const auto c = curve::build_curve(curve::CurveSpec::circle(), 512);
  const double C = curve::carleson_constant(c, curve::default_carleson_grid(c));
  const double rel = std::abs(C - kPi) / kPi;
  return {rel <= 0.02, fmt("C = %.5f", C) + fmt(", relative error %.2e", rel)};
}

// 8. Discrete S on Fourier modes of the circle.
Outcome discrete_operator_oracle() {
  const std::size_t n = 256;
  const auto c = curve::build_curve(curve::CurveSpec::circle(), n);
  const auto S = opnum::discrete_S(c).entries;
  double worst = 0.0;
  for (int k = -5; k <= 5; ++k) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(j)) = std::pow(c.nodes[j], k);
    const Eigen::VectorXcd r = S * v - (k >= 0 ? 1.0 : -1.0) * v;
    worst = std::max(worst, r.norm() / v.norm());
  }
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n));
  const double row = (S * ones - ones).cwiseAbs().maxCoeff();
  return {worst <= 1e-2 && row <= 1e-12,
          fmt("max relative error %.2e", worst) + fmt(", max |S1 - 1| %.1e", row)};
}

// 9. Finite sections on the circle follow the predictions.
Outcome finite_sections() {
  const auto t0 = std::chrono::steady_clock::now();
  curve::CurveSpec spec = curve::CurveSpec::circle();
  spec.marks = {{"s", 0.5}};
  const std::vector<std::size_t> sizes{64, 128, 256};
  const auto expr = symbol::OperatorExpr::aP_plus_Q("a");
  opnum::Coefficients good, bad;
  good["a"] = symbol::PCCoefficient::scalar_jump("t", 1.0, "s", Complex(0.0, 1.0));
  bad["a"] = symbol::PCCoefficient::scalar_jump("t", 1.0, "s", -1.0);
  const auto rg = opnum::finite_section_trend(expr, spec, good, sizes);
  const auto rb = opnum::finite_section_trend(expr, spec, bad, sizes);
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "1->i " << opnum::to_string(rg.trend) << fmt(" (%.4f", rg.min_svs.front())
     << fmt(" -> %.4f)", rg.min_svs.back()) << ", 1->-1 " << opnum::to_string(rb.trend)
     << fmt(" (%.4f", rb.min_svs.front()) << fmt(" -> %.4f)", rb.min_svs.back())
     << fmt(", %.2f s", s);
  return {rg.trend == opnum::Trend::bounded_below && rb.trend == opnum::Trend::decaying && s < 60.0,
          os.str()};
}

// 10. Luxemburg-Nakano norm reductions.
Outcome luxemburg_reduction() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> pd(1.1, 10.0);
  std::normal_distribution<double> g;
  const auto c = curve::build_curve(curve::CurveSpec::ellipse(1.5, 1.0), 200);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = pd(rng);
    std::vector<Complex> f(c.size());
    for (auto& v : f) v = {g(rng), g(rng)};
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += std::pow(std::abs(f[k]), p) * c.arclen_weights[k];
    const double classical = std::pow(s, 1.0 / p);
    const double lux = expspace::luxemburg_norm(f, expspace::Exponent::constant(p), nullptr, c);
    worst = std::max(worst, std::abs(lux - classical) / classical);
  }
  const auto circle = curve::build_curve(curve::CurveSpec::circle(), 256);
  const std::vector<Complex> one(circle.size(), 1.0);
  const double err =
      std::abs(expspace::luxemburg_norm(one, expspace::Exponent::constant(2.0), nullptr, circle) -
               std::sqrt(2.0 * kPi));
  return {worst <= 1e-10 && err <= 1e-8,
          fmt("max relative deviation %.2e", worst) + fmt(", |norm(1) - sqrt(2 pi)| %.2e", err)};
}

// 11. Shift integer, boundedness and the auxiliary exponent chain.
Outcome shift_chain() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  int checked = 0, violations = 0, draws = 0;
  while (checked < 1000 && draws < 100000) {
    ++draws;
    const RandomJump j = random_jump(rng);
    const fredholm::JumpDatum d{"t", j.am, j.ap, j.p, j.dm, j.dp};
    if (!fredholm::is_fredholm_scalar({d}).fredholm) continue;
    ++checked;
    const auto k = fredholm::find_shift_k(d);
    if (!k) {
      ++violations;
      continue;
    }
    const Complex gamma = static_cast<double>(*k) - fredholm::local_exponent_gamma(j.am, j.ap);
    if (!fredholm::boundedness_ok(j.p, j.dm, j.dp, gamma)) {
      ++violations;
      continue;
    }
    const double p_min = 1.0 + (j.p - 1.0) * u(rng);
    const auto p0 = fredholm::find_p0(p_min, j.p, j.dm, j.dp, gamma);
    if (!p0 || !p0->self_check_ok || !(p0->lower_condition > 0.0) || !(p0->upper_condition < 1.0) ||
        !(p0->p0 > 1.0 && p0->p0 < p_min)) {
      ++violations;
    }
  }
  return {checked == 1000 && violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(checked) + " cases"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"leaf degeneracy", leaf_degeneracy},
      {"median separating point", median_separation},
      {"criterion vs symbol determinant", criterion_symbol_equivalence},
      {"classical reduction", classical_reduction},
      {"curve-induced massiveness", curve_massiveness},
      {"spirality estimation", spirality_estimation},
      {"Carleson constant", carleson_circle},
      {"discrete operator oracle", discrete_operator_oracle},
      {"finite-section consistency", finite_sections},
      {"Luxemburg-Nakano norm", luxemburg_reduction},
      {"boundedness/shift chain", shift_chain},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s %2zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
