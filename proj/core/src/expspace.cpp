#include "leafspec/expspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leafspec/errors.hpp"

namespace leafspec::expspace {

namespace {

void check_exponent_value(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterError("exponent values must lie in (1, inf), got " + std::to_string(p));
  }
}

void check_aligned(const Exponent& p, const DiscretizedCurve& curve) {
  if (p.kind() == Exponent::Kind::sampled && p.values().size() != curve.size()) {
    throw InputError("sampled exponent is not aligned with the curve nodes");
  }
}

// Terms log((|f_k| w_k)^{p_k} arclen_k) / p_k pieces for the modular in log form.
struct ModularTerms {
  std::vector<double> log_fw;  // log(|f_k| w_k)
  std::vector<double> p;
  std::vector<double> log_len;
};

ModularTerms collect_terms(std::span<const Complex> f, const Exponent& p, const WeightSamples* w,
                           const DiscretizedCurve& curve) {
  if (f.size() != curve.size()) throw InputError("function samples are not aligned with the curve");
  check_aligned(p, curve);
  if (w != nullptr && w->values.size() != curve.size()) {
    throw InputError("weight samples are not aligned with the curve");
  }
  ModularTerms terms;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f[k].real()) || !std::isfinite(f[k].imag())) {
      throw InputError("function samples must be finite");
    }
    double weight = 1.0;
    if (w != nullptr) {
      if (!w->valid[k]) continue;
      weight = w->values[k];
      if (!std::isfinite(weight) || weight < 0.0) throw InputError("weights must be finite and >= 0");
    }
    const double a = std::abs(f[k]) * weight;
    if (a == 0.0 || curve.arclen_weights[k] == 0.0) continue;
    terms.log_fw.push_back(std::log(std::abs(f[k])) + std::log(weight));
    terms.p.push_back(p.at(k));
    terms.log_len.push_back(std::log(curve.arclen_weights[k]));
  }
  return terms;
}

// log of the modular at lambda = exp(mu), evaluated with a log-sum-exp.
double log_modular(const ModularTerms& terms, double mu) {
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < terms.p.size(); ++i) {
    peak = std::max(peak, terms.p[i] * (terms.log_fw[i] - mu) + terms.log_len[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.p.size(); ++i) {
    sum += std::exp(terms.p[i] * (terms.log_fw[i] - mu) + terms.log_len[i] - peak);
  }
  return peak + std::log(sum);
}

}  // namespace

Exponent Exponent::constant(double p) {
  check_exponent_value(p);
  Exponent e;
  e.kind_ = Kind::constant;
  e.p_min_ = p;
  e.p_max_ = p;
  return e;
}

Exponent Exponent::sampled(std::vector<double> values) {
  if (values.empty()) throw ParameterError("sampled exponent needs values");
  for (double v : values) check_exponent_value(v);
  Exponent e;
  e.kind_ = Kind::sampled;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  e.p_min_ = *lo;
  e.p_max_ = *hi;
  e.values_ = std::move(values);
  return e;
}

double Exponent::at(std::size_t k) const {
  return kind_ == Kind::constant ? p_min_ : values_.at(k);
}

Exponent log_perturbation(const DiscretizedCurve& curve, const std::string& t_label, double base,
                          double amplitude) {
  const curve::Complex t = curve.nodes[curve.index_of(t_label)];
  std::vector<double> values(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double r = std::abs(curve.nodes[k] - t);
    values[k] = r == 0.0 ? base : base + amplitude / (1.0 - std::log(r));
  }
  return Exponent::sampled(std::move(values));
}

Exponent holder_perturbation(const DiscretizedCurve& curve, const std::string& t_label,
                             double base, double amplitude, double power, double frequency) {
  if (!(power > 0.0)) throw ParameterError("Hoelder power must be positive");
  const curve::Complex t = curve.nodes[curve.index_of(t_label)];
  std::vector<double> values(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const curve::Complex d = curve.nodes[k] - t;
    const double r = std::abs(d);
    values[k] = r == 0.0 ? base
                         : base + amplitude * std::pow(r, power) * std::cos(frequency * std::arg(d));
  }
  return Exponent::sampled(std::move(values));
}

DiniLipschitzEstimate dini_lipschitz_constant(const Exponent& p, const DiscretizedCurve& curve) {
  check_aligned(p, curve);
  DiniLipschitzEstimate out;
  bool any_pair = false;
  const std::size_t m = curve.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r = std::abs(curve.nodes[i] - curve.nodes[j]);
      if (r > 0.5 || r == 0.0) continue;
      any_pair = true;
      if (p.kind() == Exponent::Kind::constant) continue;
      out.constant = std::max(out.constant, std::abs(p.at(i) - p.at(j)) * (-std::log(r)));
    }
  }
  out.no_close_pairs = !any_pair;
  return out;
}

Exponent conjugate(const Exponent& p) {
  if (p.kind() == Exponent::Kind::constant) return Exponent::constant(p.p_min() / (p.p_min() - 1.0));
  std::vector<double> q(p.values().size());
  std::transform(p.values().begin(), p.values().end(), q.begin(),
                 [](double v) { return v / (v - 1.0); });
  return Exponent::sampled(std::move(q));
}

WeightSamples phi_weight(const DiscretizedCurve& curve, const std::string& t_label, Complex gamma) {
  const curve::ArgumentBranch branch = curve::unwrap_argument(curve, t_label);
  const curve::Complex t = curve.nodes[branch.t_index];
  WeightSamples w;
  w.t_label = t_label;
  w.gamma = gamma;
  w.values.assign(curve.size(), 0.0);
  w.valid = branch.valid;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (!branch.valid[k]) continue;
    const double r = std::abs(curve.nodes[k] - t);
    // |tau - t|^{Re g} * exp(-arg)^{Im g}
    w.values[k] = std::exp(gamma.real() * std::log(r) - gamma.imag() * branch.values[k]);
  }
  return w;
}

double modular(std::span<const Complex> f, const Exponent& p, const WeightSamples* w,
               const DiscretizedCurve& curve, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("modular needs lambda > 0");
  const ModularTerms terms = collect_terms(f, p, w, curve);
  if (terms.p.empty()) return 0.0;
  return std::exp(log_modular(terms, std::log(lambda)));
}

double luxemburg_norm(std::span<const Complex> f, const Exponent& p, const WeightSamples* w,
                      const DiscretizedCurve& curve) {
  const ModularTerms terms = collect_terms(f, p, w, curve);
  if (terms.p.empty()) return 0.0;

  // log_modular is strictly decreasing in mu = log(lambda); bracket its root.
  double mu = *std::max_element(terms.log_fw.begin(), terms.log_fw.end());
  double lo = mu, hi = mu;
  double step = 1.0;
  while (log_modular(terms, lo) < 0.0) {
    lo -= step;
    step *= 2.0;
    if (!std::isfinite(lo)) throw ResolutionError("failed to bracket the Luxemburg norm");
  }
  step = 1.0;
  while (log_modular(terms, hi) > 0.0) {
    hi += step;
    step *= 2.0;
    if (!std::isfinite(hi)) throw ResolutionError("failed to bracket the Luxemburg norm");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (log_modular(terms, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace leafspec::expspace
