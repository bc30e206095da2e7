#pragma once

// The two portfolio-choice models. An investor with future risk-free wealth
// w holds alpha units of a risky asset whose excess return is a fuzzy number
// B; total utility is the possibilistic expected utility of final wealth, and
// the optimal alpha solves a concave first-order condition. A mixed variant
// adds an additive probabilistic background risk Z.
//
// For each model this module provides the total utility and its derivative,
// an exact solver for the first-order condition (derivative-sign bracketing
// plus safeguarded secant/bisection), and the closed-form second-order
// approximations of the optimal allocation driven by the first three
// possibilistic moments of B and the risk-aversion/prudence indices of u.
// The exact solver doubles as the oracle for the approximations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "possport/errors.hpp"
#include "possport/fuzzy.hpp"
#include "possport/quadrature.hpp"
#include "possport/random_variable.hpp"
#include "possport/utility.hpp"

namespace possport {

namespace detail {

// Open alpha-interval on which wealth + alpha*x stays inside
// (domain_lower, domain_upper) for every x in the support interval. The
// bounds are shrunk by a relative margin of 1e-9 to keep evaluations
// strictly interior.
inline std::pair<double, double> feasible_alpha_interval(double wealth,
                                                         std::pair<double, double> support,
                                                         double domain_lower,
                                                         double domain_upper) {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (const double x : {support.first, support.second}) {
    if (x == 0.0) continue;
    if (x > 0.0) {
      if (std::isfinite(domain_upper)) upper = std::min(upper, (domain_upper - wealth) / x);
      if (std::isfinite(domain_lower)) lower = std::max(lower, (domain_lower - wealth) / x);
    } else {
      if (std::isfinite(domain_lower)) upper = std::min(upper, (domain_lower - wealth) / x);
      if (std::isfinite(domain_upper)) lower = std::max(lower, (domain_upper - wealth) / x);
    }
  }
  constexpr double kMargin = 1e-9;
  if (std::isfinite(upper)) upper -= kMargin * std::max(1.0, std::abs(upper));
  if (std::isfinite(lower)) lower += kMargin * std::max(1.0, std::abs(lower));
  return {lower, upper};
}

inline void require_feasible(const std::pair<double, double>& interval, double alpha) {
  if (!(alpha > interval.first && alpha < interval.second))
    throw FeasibilityError(alpha, interval.first, interval.second);
}

}  // namespace detail

struct ExcessReturnDecomposition {
  double premium;        // k, with k*mu = E_f(B)
  double mu;             // premium unit, normalized to 1
  FuzzyNumber centered;  // A = B - E_f(B), so E_f(A) = 0
};

// Split the excess return as B = k*mu + A with E_f(A) = 0. mu is fixed to 1,
// so k carries the whole risk premium; only the product k*mu enters any
// downstream formula. A negative premium is rejected: the small-premium
// expansion starts from a zero allocation and does not cover short positions.
inline ExcessReturnDecomposition decompose_excess_return(const FuzzyNumber& excess_return,
                                                         const WeightingFunction& weighting,
                                                         const QuadratureRule& rule) {
  const double mean_excess = expected_value(excess_return, weighting, rule);
  if (mean_excess < -1e-12)
    throw std::invalid_argument("negative possibilistic risk premium E_f(B) = " +
                                detail::format_double(mean_excess) +
                                "; the model requires E_f(B) >= 0");
  return {std::max(mean_excess, 0.0), 1.0, excess_return.shifted(-mean_excess)};
}

// Immutable standard model: future risk-free wealth w = w0(1+r), fuzzy excess
// return B, weighting f, utility u, and the quadrature rule used for every
// expectation. Centered moments are cached on construction.
class StandardModel {
 public:
  StandardModel(double wealth, FuzzyNumber excess_return, WeightingFunction weighting,
                UtilityFunction utility,
                QuadratureRule rule = gauss_legendre_01(kDefaultQuadratureOrder))
      : wealth_(wealth),
        excess_(std::move(excess_return)),
        weighting_(std::move(weighting)),
        utility_(std::move(utility)),
        rule_(std::move(rule)),
        decomposition_(decompose_excess_return(excess_, weighting_, rule_)) {
    if (!std::isfinite(wealth_) || !utility_.in_domain(wealth_))
      throw std::domain_error("risk-free wealth w = " + detail::format_double(wealth_) +
                              " is outside the utility domain (" +
                              detail::format_double(utility_.domain_lower()) + ", " +
                              detail::format_double(utility_.domain_upper()) + ")");
    variance_ = nth_moment(decomposition_.centered, weighting_, 2, rule_);
    third_central_ = nth_moment(decomposition_.centered, weighting_, 3, rule_);
    feasible_ = detail::feasible_alpha_interval(wealth_, excess_.support(),
                                                utility_.domain_lower(),
                                                utility_.domain_upper());
  }

  double wealth() const noexcept { return wealth_; }
  const FuzzyNumber& excess_return() const noexcept { return excess_; }
  const WeightingFunction& weighting() const noexcept { return weighting_; }
  const UtilityFunction& utility() const noexcept { return utility_; }
  const QuadratureRule& rule() const noexcept { return rule_; }

  double premium() const noexcept { return decomposition_.premium; }  // k
  double mu() const noexcept { return decomposition_.mu; }
  const FuzzyNumber& centered_return() const noexcept { return decomposition_.centered; }

  double mean_excess() const noexcept { return decomposition_.premium; }   // E_f(B)
  double variance_excess() const noexcept { return variance_; }            // Var_f(B) = E_f(A^2)
  double third_central_excess() const noexcept { return third_central_; }  // E_f(A^3)

  std::pair<double, double> feasible_interval() const noexcept { return feasible_; }

 private:
  double wealth_;
  FuzzyNumber excess_;
  WeightingFunction weighting_;
  UtilityFunction utility_;
  QuadratureRule rule_;
  ExcessReturnDecomposition decomposition_;
  double variance_ = 0.0;
  double third_central_ = 0.0;
  std::pair<double, double> feasible_ = {0.0, 0.0};
};

// Standard model plus an additive background risk Z on final wealth. The
// feasible interval additionally keeps wealth + alpha*x + z inside the
// utility domain for every outcome z.
class MixedModel {
 public:
  MixedModel(double wealth, FuzzyNumber excess_return, WeightingFunction weighting,
             UtilityFunction utility, DiscreteRandomVariable background_risk,
             QuadratureRule rule = gauss_legendre_01(kDefaultQuadratureOrder))
      : standard_(wealth, std::move(excess_return), std::move(weighting),
                  std::move(utility), std::move(rule)),
        background_(std::move(background_risk)),
        mean_background_(mean(background_)) {
    const auto& u = standard_.utility();
    for (const double z : background_.outcomes())
      if (!u.in_domain(standard_.wealth() + z))
        throw std::domain_error("wealth + z = " +
                                detail::format_double(standard_.wealth() + z) +
                                " leaves the utility domain for background outcome z = " +
                                detail::format_double(z));
    feasible_ = detail::feasible_alpha_interval(
        standard_.wealth(), standard_.excess_return().support(),
        u.domain_lower() - background_.min_outcome(),
        u.domain_upper() - background_.max_outcome());
  }

  const StandardModel& standard() const noexcept { return standard_; }
  const DiscreteRandomVariable& background_risk() const noexcept { return background_; }
  double mean_background() const noexcept { return mean_background_; }  // M(Z)

  double wealth() const noexcept { return standard_.wealth(); }
  const FuzzyNumber& excess_return() const noexcept { return standard_.excess_return(); }
  const WeightingFunction& weighting() const noexcept { return standard_.weighting(); }
  const UtilityFunction& utility() const noexcept { return standard_.utility(); }
  const QuadratureRule& rule() const noexcept { return standard_.rule(); }
  double premium() const noexcept { return standard_.premium(); }
  double mu() const noexcept { return standard_.mu(); }
  const FuzzyNumber& centered_return() const noexcept { return standard_.centered_return(); }
  double mean_excess() const noexcept { return standard_.mean_excess(); }
  double variance_excess() const noexcept { return standard_.variance_excess(); }
  double third_central_excess() const noexcept { return standard_.third_central_excess(); }

  std::pair<double, double> feasible_interval() const noexcept { return feasible_; }

 private:
  StandardModel standard_;
  DiscreteRandomVariable background_;
  double mean_background_;
  std::pair<double, double> feasible_ = {0.0, 0.0};
};

// V(alpha) = E_f[u(w + alpha B)].
inline double total_utility_V(const StandardModel& model, double alpha) {
  detail::require_feasible(model.feasible_interval(), alpha);
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  return possibilistic_expected_utility(
      [&](double x) { return utility.value(wealth + alpha * x); }, model.excess_return(),
      model.weighting(), model.rule());
}

// V'(alpha) = E_f[B u'(w + alpha B)]; at alpha = 0 this is E_f(B) u'(w).
inline double marginal_utility_Vprime(const StandardModel& model, double alpha) {
  detail::require_feasible(model.feasible_interval(), alpha);
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  return possibilistic_expected_utility(
      [&](double x) { return x * utility.d1(wealth + alpha * x); }, model.excess_return(),
      model.weighting(), model.rule());
}

// W(alpha) = E_f[u(w + alpha B + Z)].
inline double total_utility_W(const MixedModel& model, double alpha) {
  detail::require_feasible(model.feasible_interval(), alpha);
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  return mixed_expected_utility(
      [&](double x, double z) { return utility.value(wealth + alpha * x + z); },
      model.excess_return(), model.background_risk(), model.weighting(), model.rule());
}

// W'(alpha) = E_f[B u'(w + alpha B + Z)]; at alpha = 0 this is
// E_f(B) M(u'(w + Z)).
inline double marginal_utility_Wprime(const MixedModel& model, double alpha) {
  detail::require_feasible(model.feasible_interval(), alpha);
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  return mixed_expected_utility(
      [&](double x, double z) { return x * utility.d1(wealth + alpha * x + z); },
      model.excess_return(), model.background_risk(), model.weighting(), model.rule());
}

struct SolverDiagnostics {
  int iterations = 0;       // derivative evaluations
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  double residual = 0.0;    // |V'(alpha)| (or |W'|) at the returned alpha
};

struct ExactAllocation {
  double alpha = 0.0;
  SolverDiagnostics diagnostics{};
};

namespace detail {

// Root of a strictly decreasing derivative g on [0, feasible_upper):
// bracket by doubling, then alternate secant and bisection until the bracket
// is 1e-12 wide, and keep bisecting until |g| <= tol. g(0) <= 0 means the
// premium is (numerically) zero and the concave objective peaks at 0.
template <class Derivative>
ExactAllocation solve_first_order(Derivative&& derivative, double feasible_upper,
                                  double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  int evaluations = 0;
  auto eval = [&](double alpha) {
    ++evaluations;
    // Treat a domain failure inside the (margin-shrunk) feasible interval as
    // an overflow of u' near the boundary: g is far negative there.
    try {
      return derivative(alpha);
    } catch (const std::domain_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const double at_zero = eval(0.0);
  if (std::isnan(at_zero)) throw SolverError("marginal utility is not evaluable at alpha = 0");
  if (!(at_zero > 0.0)) {
    const double residual = std::abs(at_zero);
    if (!(residual <= tol))
      throw SolverError("marginal utility at alpha = 0 is negative (" +
                        format_double(at_zero) +
                        "); the premium must be non-negative");
    return {0.0, {evaluations, 0.0, 0.0, residual}};
  }

  const double cap = std::isfinite(feasible_upper) ? feasible_upper : 1e12;
  if (!(cap > 0.0))
    throw SolverError("feasible interval degenerated: upper bound " + format_double(cap));

  double lower = 0.0;
  double at_lower = at_zero;
  double upper = std::min(1.0, cap);
  double at_upper = eval(upper);
  while (at_upper > 0.0) {
    if (upper >= cap) throw BoundaryError(cap);
    lower = upper;
    at_lower = at_upper;
    upper = std::min(2.0 * upper, cap);
    at_upper = eval(upper);
  }
  if (std::isnan(at_upper))
    throw SolverError("marginal utility is not evaluable at alpha = " + format_double(upper));

  for (int round = 0; round < 400; ++round) {
    const double width = upper - lower;
    const double width_tol =
        std::max(1e-12, 8.0 * std::numeric_limits<double>::epsilon() *
                            std::max(std::abs(lower), std::abs(upper)));
    if (width <= width_tol) break;
    double candidate = 0.5 * (lower + upper);
    if (round % 2 == 0 && std::isfinite(at_lower) && std::isfinite(at_upper) &&
        at_lower != at_upper) {
      const double secant = upper - at_upper * (upper - lower) / (at_upper - at_lower);
      if (secant > lower && secant < upper) candidate = secant;
    }
    const double at_candidate = eval(candidate);
    if (std::isnan(at_candidate))
      throw SolverError("marginal utility is not evaluable at alpha = " +
                        format_double(candidate));
    if (at_candidate == 0.0) {
      lower = upper = candidate;
      at_lower = at_upper = 0.0;
      break;
    }
    if (at_candidate > 0.0) {
      lower = candidate;
      at_lower = at_candidate;
    } else {
      upper = candidate;
      at_upper = at_candidate;
    }
  }

  double alpha = 0.5 * (lower + upper);
  double at_alpha = eval(alpha);
  while (std::abs(at_alpha) > tol) {
    if (upper - lower <= 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(alpha)))
      throw SolverError("residual " + format_double(std::abs(at_alpha)) +
                        " still above tolerance " + format_double(tol) +
                        " at a machine-precision bracket");
    if (at_alpha > 0.0)
      lower = alpha;
    else
      upper = alpha;
    alpha = 0.5 * (lower + upper);
    at_alpha = eval(alpha);
  }
  return {alpha, {evaluations, lower, upper, std::abs(at_alpha)}};
}

}  // namespace detail

// alpha(k): root of E_f[B u'(w + alpha B)] = 0. V is concave, so the root is
// unique; no interior sign change raises BoundaryError.
inline ExactAllocation solve_exact_standard(const StandardModel& model, double tol = 1e-10) {
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  auto derivative = [&](double alpha) {
    return possibilistic_expected_utility(
        [&](double x) { return x * utility.d1(wealth + alpha * x); }, model.excess_return(),
        model.weighting(), model.rule());
  };
  return detail::solve_first_order(derivative, model.feasible_interval().second, tol);
}

// beta(k): root of E_f[B u'(w + beta B + Z)] = 0.
inline ExactAllocation solve_exact_mixed(const MixedModel& model, double tol = 1e-10) {
  const double wealth = model.wealth();
  const auto& utility = model.utility();
  auto derivative = [&](double alpha) {
    return mixed_expected_utility(
        [&](double x, double z) { return x * utility.d1(wealth + alpha * x + z); },
        model.excess_return(), model.background_risk(), model.weighting(), model.rule());
  };
  return detail::solve_first_order(derivative, model.feasible_interval().second, tol);
}

namespace detail {

inline double require_positive_variance(double variance) {
  if (!(variance > 0.0))
    throw SingularError(
        "zero possibilistic variance: the allocation approximation is singular");
  return variance;
}

}  // namespace detail

// alpha'(0) = mu / (E_f(A^2) r_u(w)): first-order response of the optimal
// allocation to the premium.
inline double approx_alpha_prime0(const StandardModel& model) {
  const double variance = detail::require_positive_variance(model.variance_excess());
  return model.mu() / (variance * arrow_pratt(model.utility(), model.wealth()));
}

// alpha''(0) = (P_u(w)/r_u(w)^2) E_f(A^3)/E_f(A^2)^3 mu^2: the prudence and
// skewness driven curvature.
inline double approx_alpha_second0(const StandardModel& model) {
  const double variance = detail::require_positive_variance(model.variance_excess());
  const double aversion = arrow_pratt(model.utility(), model.wealth());
  const double prudence_index = prudence(model.utility(), model.wealth());
  return prudence_index / (aversion * aversion) *
         (model.third_central_excess() / (variance * variance * variance)) * model.mu() *
         model.mu();
}

struct ApproxAllocation {
  double alpha = 0.0;
  double first_term = 0.0;
  double second_term = 0.0;
};

// Second-order expansion of the optimal allocation around a zero premium:
//   alpha ~ E_f(B)/(r_u(w) Var_f(B))
//         + (1/2)(P_u(w)/r_u(w)^2) E_f[(B-E_f(B))^3]/Var_f(B)^3 E_f(B)^2,
// assembled exactly as k*alpha'(0) + (k^2/2)*alpha''(0).
inline ApproxAllocation approx_standard(const StandardModel& model) {
  const double k = model.premium();
  const double first = k * approx_alpha_prime0(model);
  const double second = 0.5 * k * k * approx_alpha_second0(model);
  return {first + second, first, second};
}

// beta'(0) = (mu/E_f(A^2)) (1/r_u(w) - M(Z)).
inline double approx_beta_prime0(const MixedModel& model) {
  const double variance = detail::require_positive_variance(model.variance_excess());
  const double aversion = arrow_pratt(model.utility(), model.wealth());
  return model.mu() / variance * (1.0 / aversion - model.mean_background());
}

// beta''(0) = P_u(w) beta'(0)^2 / Var_f(B) * E_f[(B-E_f(B))^3] / (1 - M(Z) P_u(w)).
// The pole 1 - M(Z) P_u(w) = 0 is reported, never patched.
inline double approx_beta_second0(const MixedModel& model) {
  const double variance = detail::require_positive_variance(model.variance_excess());
  const double prudence_index = prudence(model.utility(), model.wealth());
  const double first_response = approx_beta_prime0(model);
  const double denominator = 1.0 - model.mean_background() * prudence_index;
  if (denominator == 0.0)
    throw PoleError("1 - M(Z) P_u(w) = 0: the second-order term of the mixed "
                    "approximation is singular at this background risk");
  return prudence_index * first_response * first_response / variance *
         (model.third_central_excess() / denominator);
}

// Mixed-model counterpart of approx_standard, assembled exactly as
// k*beta'(0) + (k^2/2)*beta''(0). With M(Z) = 0 it reduces to the standard
// approximation.
inline ApproxAllocation approx_mixed(const MixedModel& model) {
  const double k = model.premium();
  const double first = k * approx_beta_prime0(model);
  const double second = 0.5 * k * k * approx_beta_second0(model);
  return {first + second, first, second};
}

// Exact and approximate allocations side by side with the moment and index
// inputs and the solver diagnostics.
struct AllocationReport {
  double alpha_exact = 0.0;
  double alpha_approx = 0.0;
  double first_order_term = 0.0;
  double second_order_term = 0.0;
  double mean_excess = 0.0;
  double variance_excess = 0.0;
  double third_central_excess = 0.0;
  std::optional<double> mean_background;  // M(Z); absent for the standard model
  double risk_aversion = 0.0;             // r_u(w)
  double prudence_index = 0.0;            // P_u(w)
  double abs_error = 0.0;
  double rel_error = 0.0;
  SolverDiagnostics solver{};
};

namespace detail {

inline void fill_errors(AllocationReport& report) {
  report.abs_error = std::abs(report.alpha_exact - report.alpha_approx);
  if (report.alpha_exact != 0.0)
    report.rel_error = report.abs_error / std::abs(report.alpha_exact);
  else
    report.rel_error =
        report.abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline AllocationReport allocate_standard(const StandardModel& model, double tol = 1e-10) {
  AllocationReport report;
  const ApproxAllocation approx = approx_standard(model);
  const ExactAllocation exact = solve_exact_standard(model, tol);
  report.alpha_exact = exact.alpha;
  report.alpha_approx = approx.alpha;
  report.first_order_term = approx.first_term;
  report.second_order_term = approx.second_term;
  report.mean_excess = model.mean_excess();
  report.variance_excess = model.variance_excess();
  report.third_central_excess = model.third_central_excess();
  report.risk_aversion = arrow_pratt(model.utility(), model.wealth());
  report.prudence_index = prudence(model.utility(), model.wealth());
  report.solver = exact.diagnostics;
  detail::fill_errors(report);
  return report;
}

inline AllocationReport allocate_mixed(const MixedModel& model, double tol = 1e-10) {
  AllocationReport report;
  const ApproxAllocation approx = approx_mixed(model);
  const ExactAllocation exact = solve_exact_mixed(model, tol);
  report.alpha_exact = exact.alpha;
  report.alpha_approx = approx.alpha;
  report.first_order_term = approx.first_term;
  report.second_order_term = approx.second_term;
  report.mean_excess = model.mean_excess();
  report.variance_excess = model.variance_excess();
  report.third_central_excess = model.third_central_excess();
  report.mean_background = model.mean_background();
  report.risk_aversion = arrow_pratt(model.utility(), model.wealth());
  report.prudence_index = prudence(model.utility(), model.wealth());
  report.solver = exact.diagnostics;
  detail::fill_errors(report);
  return report;
}

}  // namespace possport
