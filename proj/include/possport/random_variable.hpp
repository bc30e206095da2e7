#pragma once

// Finite discrete random variables for the probabilistic background risk,
// their expectations, and the mixed expected utility that combines a fuzzy
// component (level-set averaging) with a probabilistic one.

#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "possport/errors.hpp"
#include "possport/fuzzy.hpp"
#include "possport/quadrature.hpp"

namespace possport {

class DiscreteRandomVariable {
 public:
  DiscreteRandomVariable(std::vector<double> outcomes, std::vector<double> probabilities)
      : outcomes_(std::move(outcomes)), probabilities_(std::move(probabilities)) {
    validate();
  }

  static DiscreteRandomVariable constant(double value) {
    return DiscreteRandomVariable({value}, {1.0});
  }

  std::span<const double> outcomes() const noexcept { return outcomes_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }

  double min_outcome() const noexcept { return min_; }
  double max_outcome() const noexcept { return max_; }

 private:
  void validate() {
    if (outcomes_.empty() || outcomes_.size() != probabilities_.size())
      throw std::invalid_argument(
          "distribution needs matching, non-empty outcome and probability lists");
    double sum = 0.0;
    min_ = outcomes_.front();
    max_ = outcomes_.front();
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      if (!std::isfinite(outcomes_[i]))
        throw std::invalid_argument("outcomes must be finite");
      if (!std::isfinite(probabilities_[i]) || probabilities_[i] < 0.0)
        throw std::invalid_argument("probabilities must be non-negative; got " +
                                    detail::format_double(probabilities_[i]));
      sum += probabilities_[i];
      min_ = std::min(min_, outcomes_[i]);
      max_ = std::max(max_, outcomes_[i]);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("probabilities must sum to 1; got " +
                                  detail::format_double(sum, 17));
  }

  std::vector<double> outcomes_;
  std::vector<double> probabilities_;
  double min_ = 0.0;
  double max_ = 0.0;
};

// M(Z) = Σ pᵢ zᵢ.
inline double mean(const DiscreteRandomVariable& variable) {
  double sum = 0.0;
  const auto outcomes = variable.outcomes();
  const auto probabilities = variable.probabilities();
  for (std::size_t i = 0; i < outcomes.size(); ++i) sum += probabilities[i] * outcomes[i];
  return sum;
}

// M(g(Z)) = Σ pᵢ g(zᵢ).
template <std::invocable<double> Transform>
double expect(Transform&& transform, const DiscreteRandomVariable& variable) {
  double sum = 0.0;
  const auto outcomes = variable.outcomes();
  const auto probabilities = variable.probabilities();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double value = transform(outcomes[i]);
    if (!std::isfinite(value))
      throw std::domain_error("transform is not finite at outcome z = " +
                              detail::format_double(outcomes[i]));
    sum += probabilities[i] * value;
  }
  return sum;
}

// (1/2) ∫₀¹ [M(u(a₁(γ), Z)) + M(u(a₂(γ), Z))] f(γ) dγ for a bivariate
// utility u(x, z). The fuzzy and probabilistic components stay separate
// arguments; no joint distribution is involved.
template <class BivariateUtility>
  requires std::invocable<BivariateUtility, double, double>
double mixed_expected_utility(BivariateUtility&& utility, const FuzzyNumber& number,
                              const DiscreteRandomVariable& variable,
                              const WeightingFunction& weighting,
                              const QuadratureRule& rule) {
  return integrate_01(rule, [&](double gamma) {
    const double lower = number.lower(gamma);
    const double upper = number.upper(gamma);
    const double at_lower = expect([&](double z) { return utility(lower, z); }, variable);
    const double at_upper = expect([&](double z) { return utility(upper, z); }, variable);
    return 0.5 * (at_lower + at_upper) * weighting(gamma);
  });
}

}  // namespace possport
