#pragma once

// Thrice-differentiable utility functions on an open wealth interval, with
// the absolute risk-aversion and prudence indices the allocation formulas
// consume. Closed-form families: HARA, CRRA, CARA; arbitrary C³ utilities
// enter through custom(). Construction validates monotonicity, concavity and
// derivative consistency on a sampled window of the domain, so a utility
// object that exists is safe to differentiate.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "possport/errors.hpp"

namespace possport {

class UtilityFunction {
 public:
  enum class Family { hara, crra, cara, custom };
  using Evaluator = std::function<double(double)>;

  // Family parameters, kept for reporting and config round-trips.
  struct Parameters {
    double zeta = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double absolute_risk_aversion = 0.0;
  };

  // u(w) = ζ (η + w/γ)^(1-γ) on η + w/γ > 0, which reproduces the indices
  // r_u(w) = (η + w/γ)^(-1) and P_u(w) = ((γ+1)/γ)(η + w/γ)^(-1). ζ must
  // satisfy ζ(1-γ)/γ > 0 so that u is increasing; γ = 1 has no increasing
  // power form (use crra(1) for logarithmic utility).
  static UtilityFunction hara(double zeta, double eta, double gamma) {
    if (!std::isfinite(zeta) || !std::isfinite(eta) || !std::isfinite(gamma))
      throw std::invalid_argument("hara parameters must be finite");
    if (gamma == 0.0 || gamma == 1.0)
      throw std::invalid_argument(
          "hara gamma must differ from 0 and 1: the power form degenerates there "
          "(use crra(1) for logarithmic utility)");
    const double slope = zeta * (1.0 - gamma) / gamma;
    if (!(slope > 0.0))
      throw std::invalid_argument(
          "hara requires zeta*(1-gamma)/gamma > 0 so that u is increasing; got zeta = " +
          detail::format_double(zeta) + ", gamma = " + detail::format_double(gamma));
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    if (gamma > 0.0)
      lower = -gamma * eta;
    else
      upper = -gamma * eta;
    auto base = [eta, gamma](double w) { return eta + w / gamma; };
    Parameters p;
    p.zeta = zeta;
    p.eta = eta;
    p.gamma = gamma;
    return UtilityFunction(
        Family::hara, p,
        [zeta, gamma, base](double w) { return zeta * std::pow(base(w), 1.0 - gamma); },
        [slope, gamma, base](double w) { return slope * std::pow(base(w), -gamma); },
        [slope, gamma, base](double w) { return -slope * std::pow(base(w), -gamma - 1.0); },
        [slope, gamma, base](double w) {
          return slope * (gamma + 1.0) / gamma * std::pow(base(w), -gamma - 2.0);
        },
        lower, upper);
  }

  // u(w) = w^(1-γ)/(1-γ) for γ != 1, ln w for γ = 1, on w > 0.
  static UtilityFunction crra(double gamma) {
    if (!std::isfinite(gamma) || !(gamma > 0.0))
      throw std::invalid_argument("crra gamma must be positive; got " +
                                  detail::format_double(gamma));
    Evaluator value;
    if (gamma == 1.0)
      value = [](double w) { return std::log(w); };
    else
      value = [gamma](double w) { return std::pow(w, 1.0 - gamma) / (1.0 - gamma); };
    Parameters p;
    p.gamma = gamma;
    return UtilityFunction(
        Family::crra, p, std::move(value),
        [gamma](double w) { return std::pow(w, -gamma); },
        [gamma](double w) { return -gamma * std::pow(w, -gamma - 1.0); },
        [gamma](double w) { return gamma * (gamma + 1.0) * std::pow(w, -gamma - 2.0); },
        0.0, std::numeric_limits<double>::infinity());
  }

  // u(w) = -exp(-a w)/a on the whole real line; constant absolute risk
  // aversion a.
  static UtilityFunction cara(double absolute_risk_aversion) {
    const double a = absolute_risk_aversion;
    if (!std::isfinite(a) || !(a > 0.0))
      throw std::invalid_argument("cara coefficient must be positive; got " +
                                  detail::format_double(a));
    Parameters p;
    p.absolute_risk_aversion = a;
    return UtilityFunction(
        Family::cara, p, [a](double w) { return -std::exp(-a * w) / a; },
        [a](double w) { return std::exp(-a * w); },
        [a](double w) { return -a * std::exp(-a * w); },
        [a](double w) { return a * a * std::exp(-a * w); },
        -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  }

  // User-supplied u, u', u'', u''' on the open interval (domain_lower,
  // domain_upper). Subject to the same sampled validation as the built-in
  // families.
  static UtilityFunction custom(Evaluator value, Evaluator first, Evaluator second,
                                Evaluator third, double domain_lower, double domain_upper) {
    if (!value || !first || !second || !third)
      throw std::invalid_argument("custom utility needs all four evaluators");
    if (!(domain_lower < domain_upper))
      throw std::invalid_argument("utility domain must be a non-empty open interval");
    return UtilityFunction(Family::custom, Parameters{}, std::move(value),
                           std::move(first), std::move(second), std::move(third),
                           domain_lower, domain_upper);
  }

  double value(double wealth) const { return eval(value_, wealth); }
  double d1(double wealth) const { return eval(d1_, wealth); }
  double d2(double wealth) const { return eval(d2_, wealth); }
  double d3(double wealth) const { return eval(d3_, wealth); }

  double domain_lower() const noexcept { return lower_; }
  double domain_upper() const noexcept { return upper_; }
  bool in_domain(double wealth) const noexcept {
    return wealth > lower_ && wealth < upper_;
  }

  Family family() const noexcept { return family_; }
  const Parameters& parameters() const noexcept { return parameters_; }

 private:
  UtilityFunction(Family family, Parameters parameters, Evaluator value, Evaluator first,
                  Evaluator second, Evaluator third, double lower, double upper)
      : family_(family),
        parameters_(parameters),
        value_(std::move(value)),
        d1_(std::move(first)),
        d2_(std::move(second)),
        d3_(std::move(third)),
        lower_(lower),
        upper_(upper) {
    validate();
  }

  double eval(const Evaluator& f, double wealth) const {
    if (!in_domain(wealth))
      throw std::domain_error("wealth w = " + detail::format_double(wealth) +
                              " is outside the utility domain (" +
                              detail::format_double(lower_) + ", " +
                              detail::format_double(upper_) + ")");
    return f(wealth);
  }

  // Sampled checks: u' > 0 and u'' <= 0 (increasing, concave), and each
  // derivative consistent with a central difference of the previous one.
  void validate() const {
    double lo = lower_;
    double hi = upper_;
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double margin = 0.025 * (hi - lo);
      lo += margin;
      hi -= margin;
    } else if (std::isfinite(lo)) {
      hi = lo + 10.5;
      lo = lo + 0.5;
    } else if (std::isfinite(hi)) {
      lo = hi - 10.5;
      hi = hi - 0.5;
    } else {
      lo = -5.0;
      hi = 5.0;
    }
    constexpr int kSamples = 100;
    for (int i = 0; i < kSamples; ++i) {
      const double w = lo + (hi - lo) * static_cast<double>(i) / (kSamples - 1);
      const double first = d1_(w);
      const double second = d2_(w);
      if (!std::isfinite(value_(w)) || !std::isfinite(first) || !std::isfinite(second) ||
          !std::isfinite(d3_(w)))
        throw std::invalid_argument(
            "utility and its derivatives must be finite on the domain; failure at w = " +
            detail::format_double(w));
      if (!(first > 0.0))
        throw std::invalid_argument("u' must be strictly positive on the domain; u'(" +
                                    detail::format_double(w) +
                                    ") = " + detail::format_double(first));
      if (!(second <= 0.0))
        throw std::invalid_argument("u'' must be non-positive on the domain; u''(" +
                                    detail::format_double(w) +
                                    ") = " + detail::format_double(second));
      check_difference(value_, d1_, w, "u'");
      check_difference(d1_, d2_, w, "u''");
      check_difference(d2_, d3_, w, "u'''");
    }
  }

  static void check_difference(const Evaluator& f, const Evaluator& derivative, double w,
                               const char* label) {
    const double h = 6.0e-6 * std::max(1.0, std::abs(w));
    const double estimate = (f(w + h) - f(w - h)) / (2.0 * h);
    const double stated = derivative(w);
    const double scale = std::max({std::abs(stated), std::abs(estimate), 1e-6});
    if (!(std::abs(estimate - stated) <= 1e-6 * scale + 1e-9))
      throw std::invalid_argument(
          std::string(label) +
          " is inconsistent with a central difference of its antiderivative at w = " +
          detail::format_double(w) + " (stated " + detail::format_double(stated) +
          ", estimated " + detail::format_double(estimate) + ")");
  }

  Family family_;
  Parameters parameters_;
  Evaluator value_;
  Evaluator d1_;
  Evaluator d2_;
  Evaluator d3_;
  double lower_;
  double upper_;
};

// r_u(w) = -u''(w)/u'(w); positive for strictly concave utilities.
inline double arrow_pratt(const UtilityFunction& utility, double wealth) {
  const double first = utility.d1(wealth);
  if (first == 0.0)
    throw SingularError("absolute risk aversion undefined: u'(w) = 0 at w = " +
                        detail::format_double(wealth));
  return -utility.d2(wealth) / first;
}

// P_u(w) = -u'''(w)/u''(w).
inline double prudence(const UtilityFunction& utility, double wealth) {
  const double second = utility.d2(wealth);
  if (second == 0.0)
    throw SingularError("prudence undefined: u''(w) = 0 (risk-neutral point) at w = " +
                        detail::format_double(wealth));
  return -utility.d3(wealth) / second;
}

struct HaraIndices {
  double inverse_risk_aversion;             // 1/r_u(w) = eta + w/gamma
  double prudence_over_squared_aversion;    // P_u(w)/r_u(w)^2 = ((gamma+1)/gamma)(eta + w/gamma)
};

// The two composite coefficients appearing in the HARA allocation formula.
inline HaraIndices hara_indices(double eta, double gamma, double wealth) {
  if (!std::isfinite(eta) || !std::isfinite(gamma) || !std::isfinite(wealth))
    throw std::invalid_argument("hara index arguments must be finite");
  if (gamma == 0.0) throw std::invalid_argument("hara gamma must be non-zero");
  const double inverse = eta + wealth / gamma;
  if (!(inverse > 0.0))
    throw std::domain_error("hara indices require eta + w/gamma > 0; got " +
                            detail::format_double(inverse));
  return {inverse, (gamma + 1.0) / gamma * inverse};
}

}  // namespace possport
