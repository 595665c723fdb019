#pragma once

// The scalar Fredholm criterion for aP + Q with piecewise continuous a, the
// local exponent gamma_t, the boundedness conditions, the shift integer k_t
// and the auxiliary exponent p0.

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace leafspec::fredholm {

using Complex = std::complex<double>;

struct JumpDatum {
  std::string t_label;
  Complex a_minus;  // a(t - 0)
  Complex a_plus;   // a(t + 0)
  double p_t = 2.0;
  double delta_minus = 0.0;
  double delta_plus = 0.0;

  /// Throws ParameterError on p_t outside (1, inf) or crossed indices.
  void validate() const;
};

struct PointReport {
  std::string t_label;
  double interval_low = 0.0;
  double interval_high = 0.0;
  std::optional<long long> blocking_integer;
  bool degenerate = false;  // a zero one-sided limit

  bool operator==(const PointReport&) const = default;
};

struct CriterionReport {
  bool fredholm = true;
  std::vector<PointReport> per_point;

  bool operator==(const CriterionReport&) const = default;
};

/// Re gamma = (arg(a-/a+) + 2 pi k) / 2 pi, Im gamma = -log|a-/a+| / 2 pi.
Complex local_exponent_gamma(Complex a_minus, Complex a_plus, long long branch_k = 0);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Closed interval swept by the criterion expression; principal arg branch
/// shifted by -branch_k.
Interval criterion_interval(const JumpDatum& j, long long branch_k = 0);

/// Smallest integer in [low, high], if any.
std::optional<long long> integer_in(Interval iv);

CriterionReport is_fredholm_scalar(const std::vector<JumpDatum>& jumps, long long branch_k = 0);

bool boundedness_ok(double p_t, double delta_minus, double delta_plus, Complex gamma);

std::optional<long long> find_shift_k(const JumpDatum& j, long long branch_k = 0);

struct P0Result {
  double p0 = 0.0;
  double lower_condition = 0.0;  // must be > 0
  double upper_condition = 0.0;  // must be < 1
  bool self_check_ok = false;
};

/// Returns p0 in the feasible interval with the two equivalent forms of the
/// boundedness conditions verified at p0, or nullopt if infeasible.
std::optional<P0Result> find_p0(double p_min, double p_t, double delta_minus, double delta_plus,
                                Complex gamma);

}  // namespace leafspec::fredholm
