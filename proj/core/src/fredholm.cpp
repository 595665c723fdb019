#include "leafspec/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leafspec/errors.hpp"
#include "leafspec/leafgeom.hpp"

namespace leafspec::fredholm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_nonzero(Complex a_minus, Complex a_plus) {
  if (a_minus == Complex{} || a_plus == Complex{}) {
    throw DegenerateSymbolError("one-sided limit vanishes");
  }
}

}  // namespace

void JumpDatum::validate() const {
  if (!(p_t > 1.0) || !std::isfinite(p_t)) throw ParameterError("p_t must lie in (1, inf)");
  if (!std::isfinite(delta_minus) || !std::isfinite(delta_plus) || delta_minus > delta_plus) {
    throw ParameterError("jump at '" + t_label + "' needs finite delta_minus <= delta_plus");
  }
  for (Complex a : {a_minus, a_plus}) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ParameterError("one-sided limits must be finite");
    }
  }
}

Complex local_exponent_gamma(Complex a_minus, Complex a_plus, long long branch_k) {
  require_nonzero(a_minus, a_plus);
  const Complex ratio = a_minus / a_plus;
  // Principal branch in (-pi, pi]; a negative zero imaginary part would give -pi.
  double angle = std::arg(ratio);
  if (angle == -std::numbers::pi) angle = std::numbers::pi;
  return {(angle + kTwoPi * static_cast<double>(branch_k)) / kTwoPi,
          -std::log(std::abs(ratio)) / kTwoPi};
}

Interval criterion_interval(const JumpDatum& j, long long branch_k) {
  j.validate();
  const Complex gamma = local_exponent_gamma(j.a_minus, j.a_plus, branch_k);
  const double base = 1.0 / j.p_t - gamma.real();
  const double x = -gamma.imag();
  const leaf::Indicators ind = leaf::indicators(j.delta_minus, j.delta_plus, x);
  return {base + ind.alpha, base + ind.beta};
}

std::optional<long long> integer_in(Interval iv) {
  const double k = std::ceil(iv.low);
  if (k <= iv.high) return static_cast<long long>(k);
  return std::nullopt;
}

CriterionReport is_fredholm_scalar(const std::vector<JumpDatum>& jumps, long long branch_k) {
  CriterionReport report;
  for (const JumpDatum& j : jumps) {
    PointReport point;
    point.t_label = j.t_label;
    try {
      const Interval iv = criterion_interval(j, branch_k);
      point.interval_low = iv.low;
      point.interval_high = iv.high;
      point.blocking_integer = integer_in(iv);
    } catch (const DegenerateSymbolError&) {
      point.degenerate = true;
    }
    if (point.degenerate || point.blocking_integer) report.fredholm = false;
    report.per_point.push_back(std::move(point));
  }
  return report;
}

bool boundedness_ok(double p_t, double delta_minus, double delta_plus, Complex gamma) {
  const leaf::Indicators ind = leaf::indicators(delta_minus, delta_plus, gamma.imag());
  const double base = 1.0 / p_t + gamma.real();
  return 0.0 < base + ind.alpha && base + ind.beta < 1.0;
}

std::optional<long long> find_shift_k(const JumpDatum& j, long long branch_k) {
  const Interval iv = criterion_interval(j, branch_k);
  const double fl = std::floor(iv.low);
  if (fl != std::floor(iv.high) || fl == iv.low) return std::nullopt;
  return -static_cast<long long>(fl);
}

std::optional<P0Result> find_p0(double p_min, double p_t, double delta_minus, double delta_plus,
                                Complex gamma) {
  if (!(p_min > 1.0) || !(p_t >= p_min)) throw ParameterError("find_p0 needs 1 < p_min <= p_t");
  if (delta_minus > delta_plus) throw ParameterError("find_p0 needs delta_minus <= delta_plus");
  const leaf::Indicators ind = leaf::indicators(delta_minus, delta_plus, gamma.imag());
  const double v = 1.0 / p_t + gamma.real() + ind.beta;
  if (!(v < 1.0)) return std::nullopt;

  double upper = p_min;
  if (v > 0.0) upper = std::min(upper, 1.0 / v);
  P0Result r;
  r.p0 = 0.5 * (1.0 + upper);
  if (!(r.p0 > 1.0 && r.p0 < upper)) return std::nullopt;

  // Both conditions expressed through the shifted exponent p0 * gamma.
  const double p0 = r.p0;
  const leaf::Indicators scaled =
      leaf::indicators(delta_minus, delta_plus, -p0 * gamma.imag());
  const double head = (p_t - p0) / p_t - p0 * gamma.real();
  r.lower_condition = head + scaled.alpha;
  r.upper_condition = head + scaled.beta;
  const double direct_lower = 1.0 - p0 / p_t - p0 * (gamma.real() + ind.beta);
  const double direct_upper = 1.0 - p0 / p_t - p0 * (gamma.real() + ind.alpha);
  const double tol = 1e-12 * std::max(1.0, std::abs(head) + p0 * std::abs(ind.beta));
  r.self_check_ok = r.lower_condition > 0.0 && r.upper_condition < 1.0 &&
                    std::abs(r.lower_condition - direct_lower) <= tol &&
                    std::abs(r.upper_condition - direct_upper) <= tol &&
                    v < 1.0 / p0;
  return r;
}

}  // namespace leafspec::fredholm
