#pragma once

// Gauss-Legendre quadrature on [0, 1].
//
// Every indicator in this library is an integral of the form
// ∫₀¹ g(γ) f(γ) dγ with a piecewise-smooth integrand (affine level-set
// endpoints composed with smooth utilities, times a polynomial weighting
// density), so a fixed-order Gauss-Legendre rule mapped affinely from
// [-1, 1] is used throughout. Default order is 64, overridable wherever a
// rule is accepted.
//
// Nodes and weights come from Newton iteration on the Legendre polynomials;
// no coefficient tables. An order-n rule integrates polynomials of degree
// <= 2n-1 exactly. The supported endpoint shapes are affine in γ, so no
// panel splitting is required; a future piecewise shape must split the
// integral at its breakpoints before applying the rule.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "possport/errors.hpp"

namespace possport {

inline constexpr int kMaxQuadratureOrder = 512;
inline constexpr int kDefaultQuadratureOrder = 64;

// Immutable node/weight pair for integration over [0, 1]. Weights sum to 1,
// so constants integrate exactly.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
      : nodes_(std::move(nodes)), weights_(std::move(weights)) {
    validate();
  }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  void validate() const {
    if (nodes_.empty() || nodes_.size() != weights_.size())
      throw std::invalid_argument(
          "quadrature rule needs matching, non-empty node and weight lists");
    double sum = 0.0;
    double previous = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!(nodes_[i] > previous && nodes_[i] < 1.0))
        throw std::invalid_argument(
            "quadrature nodes must be strictly increasing inside (0, 1)");
      if (!(weights_[i] > 0.0))
        throw std::invalid_argument("quadrature weights must be positive");
      previous = nodes_[i];
      sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > 1e-14)
      throw std::invalid_argument("quadrature weights must sum to 1; got " +
                                  detail::format_double(sum, 17));
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// n-point Gauss-Legendre rule mapped from [-1, 1] onto [0, 1].
inline QuadratureRule gauss_legendre_01(int order) {
  if (order < 1 || order > kMaxQuadratureOrder)
    throw std::invalid_argument("quadrature order must lie in [1, " +
                                std::to_string(kMaxQuadratureOrder) + "]; got " +
                                std::to_string(order));
  const auto n = static_cast<std::size_t>(order);
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess; tolerance
    // 1e-15 on the step, at most 100 iterations per root.
    double root = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                           (static_cast<double>(n) + 0.5));
    double derivative = 1.0;
    for (int iteration = 0; iteration < 100; ++iteration) {
      double previous = 1.0;
      double current = root;
      for (std::size_t k = 2; k <= n; ++k) {
        const double next =
            ((2.0 * static_cast<double>(k) - 1.0) * root * current -
             (static_cast<double>(k) - 1.0) * previous) /
            static_cast<double>(k);
        previous = current;
        current = next;
      }
      // P_n'(x) = n (x P_n(x) - P_{n-1}(x)) / (x^2 - 1)
      derivative =
          static_cast<double>(n) * (root * current - previous) / (root * root - 1.0);
      const double step = current / derivative;
      root -= step;
      if (std::abs(step) <= 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - root * root) * derivative * derivative);
    // root is the i-th largest positive root; fill symmetrically.
    nodes[i] = 0.5 * (1.0 - root);
    nodes[n - 1 - i] = 0.5 * (1.0 + root);
    weights[i] = 0.5 * weight;
    weights[n - 1 - i] = 0.5 * weight;
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

// Σ wᵢ g(xᵢ). Rejects rules applied to integrands that are not finite at a
// node, identifying the node.
template <std::invocable<double> Integrand>
double integrate_01(const QuadratureRule& rule, Integrand&& integrand) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double value = integrand(nodes[i]);
    if (!std::isfinite(value))
      throw std::domain_error("integrand is not finite at node gamma = " +
                              detail::format_double(nodes[i]));
    sum += weights[i] * value;
  }
  return sum;
}

}  // namespace possport
