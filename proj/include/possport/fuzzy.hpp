#pragma once

// Fuzzy numbers represented through their level-set endpoint functions
// γ ↦ [a₁(γ), a₂(γ)], weighting densities on [0, 1], and the possibilistic
// indicators built from them: expected utility, expected value, variance,
// raw and central moments, plus the closed forms available for triangular
// numbers under the quadratic weighting.

#include <cmath>
#include <concepts>
#include <functional>
#include <stdexcept>
#include <utility>

#include "possport/errors.hpp"
#include "possport/quadrature.hpp"

namespace possport {

// Non-negative, non-decreasing density on [0, 1] integrating to 1. The
// power family f(γ) = n γ^(n-1) covers the usual choices (n = 1 uniform,
// n = 2 quadratic); arbitrary densities enter through custom() and are
// checked, not trusted. An unnormalized density is rejected, never rescaled.
class WeightingFunction {
 public:
  enum class Kind { power, custom };

  static WeightingFunction power(double exponent) {
    if (!std::isfinite(exponent) || !(exponent >= 1.0))
      throw std::invalid_argument(
          "weighting exponent must be >= 1 so the density n*gamma^(n-1) is "
          "non-decreasing; got " +
          detail::format_double(exponent));
    return WeightingFunction(Kind::power, exponent, [exponent](double gamma) {
      return exponent * std::pow(gamma, exponent - 1.0);
    });
  }

  static WeightingFunction custom(std::function<double(double)> density) {
    return custom_with_rule(std::move(density),
                            gauss_legendre_01(kDefaultQuadratureOrder));
  }

  // Checks on a 1000-point grid (finite, non-negative, non-decreasing up to
  // 1e-12) and by quadrature (unit mass within 1e-10).
  static WeightingFunction custom_with_rule(std::function<double(double)> density,
                                            const QuadratureRule& rule) {
    if (!density) throw std::invalid_argument("weighting density must be callable");
    constexpr int kGridPoints = 1000;
    constexpr double kMonotoneTol = 1e-12;
    double previous = 0.0;
    for (int i = 0; i < kGridPoints; ++i) {
      const double gamma = static_cast<double>(i) / (kGridPoints - 1);
      const double value = density(gamma);
      if (!std::isfinite(value) || value < 0.0)
        throw std::invalid_argument(
            "weighting density must be finite and non-negative on [0, 1]; f(" +
            detail::format_double(gamma) + ") = " + detail::format_double(value));
      if (i > 0 && value < previous - kMonotoneTol)
        throw std::invalid_argument(
            "weighting density must be non-decreasing on [0, 1]; decrease at gamma = " +
            detail::format_double(gamma));
      previous = value;
    }
    const double mass = integrate_01(rule, [&](double gamma) { return density(gamma); });
    if (std::abs(mass - 1.0) > 1e-10)
      throw std::invalid_argument(
          "weighting density must integrate to 1 over [0, 1]; quadrature mass = " +
          detail::format_double(mass, 17));
    return WeightingFunction(Kind::custom, 0.0, std::move(density));
  }

  double operator()(double gamma) const { return density_(gamma); }

  Kind kind() const noexcept { return kind_; }

  double exponent() const {
    if (kind_ != Kind::power)
      throw std::logic_error("exponent() is only defined for power weightings");
    return exponent_;
  }

 private:
  WeightingFunction(Kind kind, double exponent, std::function<double(double)> density)
      : kind_(kind), exponent_(exponent), density_(std::move(density)) {}

  Kind kind_;
  double exponent_;
  std::function<double(double)> density_;
};

// Immutable fuzzy number with affine level-set endpoints. The parametric
// shapes are stored as a core interval [core_lower, core_upper] plus spreads:
//   a₁(γ) = core_lower - (1-γ)·left_spread
//   a₂(γ) = core_upper + (1-γ)·right_spread
// Triangular numbers have a single-point core, crisp numbers additionally
// have zero spreads. Shifting translates the core and preserves the shape.
class FuzzyNumber {
 public:
  enum class Shape { triangular, trapezoidal, crisp };

  static FuzzyNumber triangular(double peak, double left_spread, double right_spread) {
    check_finite(peak, "peak");
    check_spread(left_spread, "left_spread");
    check_spread(right_spread, "right_spread");
    return FuzzyNumber(Shape::triangular, peak, peak, left_spread, right_spread);
  }

  static FuzzyNumber trapezoidal(double core_lower, double core_upper,
                                 double left_spread, double right_spread) {
    check_finite(core_lower, "core_lower");
    check_finite(core_upper, "core_upper");
    check_spread(left_spread, "left_spread");
    check_spread(right_spread, "right_spread");
    if (!(core_lower <= core_upper))
      throw std::invalid_argument("trapezoidal core must satisfy core_lower <= core_upper");
    return FuzzyNumber(Shape::trapezoidal, core_lower, core_upper, left_spread,
                       right_spread);
  }

  static FuzzyNumber crisp(double value) {
    check_finite(value, "value");
    return FuzzyNumber(Shape::crisp, value, value, 0.0, 0.0);
  }

  // Every level set translated by offset; the shape tag is preserved.
  FuzzyNumber shifted(double offset) const {
    check_finite(offset, "offset");
    return FuzzyNumber(shape_, core_lower_ + offset, core_upper_ + offset, left_spread_,
                       right_spread_);
  }

  double lower(double gamma) const noexcept {
    return core_lower_ - (1.0 - gamma) * left_spread_;
  }
  double upper(double gamma) const noexcept {
    return core_upper_ + (1.0 - gamma) * right_spread_;
  }

  // [a₁(0), a₂(0)]; level sets are nested, so this interval bounds them all.
  std::pair<double, double> support() const noexcept { return {lower(0.0), upper(0.0)}; }

  Shape shape() const noexcept { return shape_; }
  double core_lower() const noexcept { return core_lower_; }
  double core_upper() const noexcept { return core_upper_; }
  double left_spread() const noexcept { return left_spread_; }
  double right_spread() const noexcept { return right_spread_; }
  bool is_crisp() const noexcept { return shape_ == Shape::crisp; }

 private:
  FuzzyNumber(Shape shape, double core_lower, double core_upper, double left_spread,
              double right_spread)
      : shape_(shape),
        core_lower_(core_lower),
        core_upper_(core_upper),
        left_spread_(left_spread),
        right_spread_(right_spread) {}

  static void check_finite(double value, const char* name) {
    if (!std::isfinite(value))
      throw std::invalid_argument(std::string("fuzzy number ") + name + " must be finite");
  }
  static void check_spread(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
      throw std::invalid_argument(std::string("fuzzy number ") + name +
                                  " must be finite and non-negative; got " +
                                  detail::format_double(value));
  }

  Shape shape_;
  double core_lower_;
  double core_upper_;
  double left_spread_;
  double right_spread_;
};

// (1/2) ∫₀¹ [u(a₁(γ)) + u(a₂(γ))] f(γ) dγ. A utility that is not finite on
// the support is reported with the offending endpoint value.
template <std::invocable<double> Utility>
double possibilistic_expected_utility(Utility&& utility, const FuzzyNumber& number,
                                      const WeightingFunction& weighting,
                                      const QuadratureRule& rule) {
  auto evaluate = [&utility](double x) {
    const double value = utility(x);
    if (!std::isfinite(value))
      throw std::domain_error("utility is not finite at level-set endpoint x = " +
                              detail::format_double(x));
    return value;
  };
  return integrate_01(rule, [&](double gamma) {
    return 0.5 * (evaluate(number.lower(gamma)) + evaluate(number.upper(gamma))) *
           weighting(gamma);
  });
}

// Crisp numbers short-circuit the moment operations below: their level sets
// collapse to a point, so the degenerate indicators are exact.

inline double expected_value(const FuzzyNumber& number, const WeightingFunction& weighting,
                             const QuadratureRule& rule) {
  if (number.is_crisp()) return number.core_lower();
  return possibilistic_expected_utility([](double x) { return x; }, number, weighting,
                                        rule);
}

inline double variance(const FuzzyNumber& number, const WeightingFunction& weighting,
                       const QuadratureRule& rule) {
  if (number.is_crisp()) return 0.0;
  const double mean = expected_value(number, weighting, rule);
  return possibilistic_expected_utility(
      [mean](double x) { return (x - mean) * (x - mean); }, number, weighting, rule);
}

inline double nth_moment(const FuzzyNumber& number, const WeightingFunction& weighting,
                         int order, const QuadratureRule& rule) {
  if (order < 1)
    throw std::invalid_argument("moment order must be a positive integer; got " +
                                std::to_string(order));
  if (number.is_crisp()) return std::pow(number.core_lower(), order);
  return possibilistic_expected_utility([order](double x) { return std::pow(x, order); },
                                        number, weighting, rule);
}

inline double central_moment(const FuzzyNumber& number, const WeightingFunction& weighting,
                             int order, const QuadratureRule& rule) {
  if (order < 2)
    throw std::invalid_argument("central moment order must be at least 2; got " +
                                std::to_string(order));
  if (number.is_crisp()) return 0.0;
  const double mean = expected_value(number, weighting, rule);
  return possibilistic_expected_utility(
      [mean, order](double x) { return std::pow(x - mean, order); }, number, weighting,
      rule);
}

struct TriangularMoments {
  double mean;
  double variance;
  double third_central;
};

// Closed-form first three indicators of a triangular number under the
// quadratic weighting f(γ) = 2γ, i.e. power(2). Other weightings need
// quadrature.
inline TriangularMoments triangular_closed_moments(double peak, double left_spread,
                                                   double right_spread) {
  if (!(left_spread >= 0.0) || !(right_spread >= 0.0))
    throw std::invalid_argument("spreads must be non-negative");
  const double ls = left_spread;
  const double rs = right_spread;
  const double mean = peak + (rs - ls) / 6.0;
  const double second = (ls * ls + rs * rs + ls * rs) / 18.0;
  const double third =
      19.0 * (rs * rs * rs - ls * ls * ls) / 1080.0 + ls * rs * (rs - ls) / 72.0;
  return {mean, second, third};
}

}  // namespace possport
