#pragma once

// Variable exponents on a sampled curve, the Dini-Lipschitz check, the
// weights phi_{t,gamma} and the Luxemburg-Nakano norm.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leafspec/curvekit.hpp"

namespace leafspec::expspace {

using Complex = std::complex<double>;
using curve::DiscretizedCurve;

class Exponent {
 public:
  enum class Kind { constant, sampled };

  static Exponent constant(double p);
  /// Values aligned with the nodes of the curve they will be used with.
  static Exponent sampled(std::vector<double> values);

  Kind kind() const { return kind_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  /// Value at node k; constant exponents ignore k.
  double at(std::size_t k) const;
  const std::vector<double>& values() const { return values_; }
  bool operator==(const Exponent&) const = default;

 private:
  Kind kind_ = Kind::constant;
  double p_min_ = 2.0;
  double p_max_ = 2.0;
  std::vector<double> values_;
};

/// p(tau) = base + amplitude / (1 - log|tau - t|), equal to base at t.
Exponent log_perturbation(const DiscretizedCurve& curve, const std::string& t_label, double base,
                          double amplitude);

/// p(tau) = base + amplitude * |tau - t|^power * cos(frequency * arg(tau - t)).
Exponent holder_perturbation(const DiscretizedCurve& curve, const std::string& t_label,
                             double base, double amplitude, double power,
                             double frequency = 0.0);

struct DiniLipschitzEstimate {
  double constant = 0.0;
  bool no_close_pairs = false;  // no node pair within distance 1/2
};

/// max over node pairs with 0 < |tau - t| <= 1/2 of |p(tau) - p(t)| * (-log|tau - t|).
DiniLipschitzEstimate dini_lipschitz_constant(const Exponent& p, const DiscretizedCurve& curve);

/// Pointwise conjugate exponent q = p / (p - 1).
Exponent conjugate(const Exponent& p);

struct WeightSamples {
  std::vector<double> values;  // 0 at masked nodes
  std::vector<bool> valid;     // false at the node t itself
  std::string t_label;
  Complex gamma;
};

/// phi_{t,gamma}(tau) = |tau - t|^{Re gamma} * eta_t(tau)^{Im gamma}.
WeightSamples phi_weight(const DiscretizedCurve& curve, const std::string& t_label, Complex gamma);

/// Discrete modular sum_k (|f_k| w_k / lambda)^{p_k} * arclen_k over valid nodes.
double modular(std::span<const Complex> f, const Exponent& p, const WeightSamples* w,
               const DiscretizedCurve& curve, double lambda);

/// Luxemburg-Nakano norm: the root lambda of modular(lambda) = 1, or 0 when
/// f vanishes. Masked weight nodes do not contribute.
double luxemburg_norm(std::span<const Complex> f, const Exponent& p, const WeightSamples* w,
                      const DiscretizedCurve& curve);

}  // namespace leafspec::expspace
