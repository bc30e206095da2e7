#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "possport/fuzzy.hpp"
#include "support/oracles.hpp"

using possport::FuzzyNumber;
using possport::WeightingFunction;
using possport::central_moment;
using possport::expected_value;
using possport::gauss_legendre_01;
using possport::integrate_01;
using possport::nth_moment;
using possport::possibilistic_expected_utility;
using possport::triangular_closed_moments;
using possport::variance;

namespace {
const possport::QuadratureRule& rule64() {
  static const auto rule = gauss_legendre_01(64);
  return rule;
}
}  // namespace

TEST_CASE("power weighting densities", "[fuzzy]") {
  const auto uniform = WeightingFunction::power(1.0);
  CHECK(uniform(0.0) == Catch::Approx(1.0));
  CHECK(uniform(0.7) == Catch::Approx(1.0));
  const auto quadratic = WeightingFunction::power(2.0);
  CHECK(quadratic(0.3) == Catch::Approx(0.6));
  CHECK(quadratic(0.0) == 0.0);
  CHECK(quadratic.kind() == WeightingFunction::Kind::power);
  CHECK(quadratic.exponent() == 2.0);

  CHECK_THROWS_AS(WeightingFunction::power(0.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightingFunction::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightingFunction::power(-2.0), std::invalid_argument);
  CHECK_NOTHROW(WeightingFunction::power(1.0));
  CHECK_NOTHROW(WeightingFunction::power(3.5));
}

TEST_CASE("power densities carry unit mass under quadrature", "[fuzzy]") {
  for (const double exponent : {1.0, 2.0, 3.0, 5.5}) {
    const auto weighting = WeightingFunction::power(exponent);
    const double mass = integrate_01(rule64(), [&](double g) { return weighting(g); });
    INFO("exponent " << exponent);
    CHECK(std::abs(mass - 1.0) <= 1e-10);
  }
}

TEST_CASE("custom weighting validation", "[fuzzy]") {
  CHECK_NOTHROW(WeightingFunction::custom([](double g) { return 2.0 * g; }));
  // Unnormalized density is rejected, not rescaled.
  CHECK_THROWS_WITH(WeightingFunction::custom([](double g) { return g; }),
                    Catch::Matchers::ContainsSubstring("integrate to 1"));
  // Decreasing density.
  CHECK_THROWS_WITH(WeightingFunction::custom([](double g) { return 2.0 * (1.0 - g); }),
                    Catch::Matchers::ContainsSubstring("non-decreasing"));
  // Negative density.
  CHECK_THROWS_WITH(WeightingFunction::custom([](double g) { return 4.0 * g - 1.0; }),
                    Catch::Matchers::ContainsSubstring("non-negative"));
}

TEST_CASE("fuzzy number construction and level sets", "[fuzzy]") {
  const auto tri = FuzzyNumber::triangular(0.05, 0.2, 0.3);
  CHECK(tri.shape() == FuzzyNumber::Shape::triangular);
  for (const double g : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(tri.lower(g) == Catch::Approx(0.05 - (1.0 - g) * 0.2).margin(0.0));
    CHECK(tri.upper(g) == Catch::Approx(0.05 + (1.0 - g) * 0.3).margin(0.0));
  }
  CHECK(tri.support().first == Catch::Approx(-0.15));
  CHECK(tri.support().second == Catch::Approx(0.35));

  const auto trap = FuzzyNumber::trapezoidal(-0.1, 0.2, 0.05, 0.1);
  CHECK(trap.lower(1.0) == Catch::Approx(-0.1));
  CHECK(trap.upper(1.0) == Catch::Approx(0.2));

  const auto point = FuzzyNumber::crisp(0.02);
  CHECK(point.is_crisp());
  CHECK(point.lower(0.3) == 0.02);
  CHECK(point.upper(0.8) == 0.02);

  CHECK_THROWS_AS(FuzzyNumber::triangular(0.0, -0.1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(FuzzyNumber::trapezoidal(0.3, 0.1, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(FuzzyNumber::crisp(std::nan("")), std::invalid_argument);
}

TEST_CASE("level-set monotonicity on a grid", "[fuzzy]") {
  oracles::Rng rng(112233);
  for (int trial = 0; trial < 20; ++trial) {
    const double peak = rng.uniform(-1.0, 1.0);
    const double ls = rng.uniform(0.0, 1.0);
    const double rs = rng.uniform(0.0, 1.0);
    const auto number = trial % 2 == 0
                            ? FuzzyNumber::triangular(peak, ls, rs)
                            : FuzzyNumber::trapezoidal(peak, peak + rng.uniform(0.0, 1.0),
                                                       ls, rs);
    double previous_lower = number.lower(0.0);
    double previous_upper = number.upper(0.0);
    for (int i = 1; i < 1000; ++i) {
      const double g = static_cast<double>(i) / 999.0;
      INFO("trial " << trial << " gamma " << g);
      REQUIRE(number.lower(g) >= previous_lower - 1e-12);
      REQUIRE(number.upper(g) <= previous_upper + 1e-12);
      REQUIRE(number.lower(g) <= number.upper(g) + 1e-12);
      previous_lower = number.lower(g);
      previous_upper = number.upper(g);
    }
  }
}

TEST_CASE("shifting translates level sets and preserves shape", "[fuzzy]") {
  const auto base = FuzzyNumber::triangular(0.05, 0.2, 0.3);
  const auto shifted = base.shifted(-0.02);
  CHECK(shifted.shape() == FuzzyNumber::Shape::triangular);
  for (const double g : {0.0, 0.4, 1.0}) {
    CHECK(shifted.lower(g) == Catch::Approx(base.lower(g) - 0.02).margin(1e-15));
    CHECK(shifted.upper(g) == Catch::Approx(base.upper(g) - 0.02).margin(1e-15));
  }
}

TEST_CASE("possibilistic expected utility examples", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);

  SECTION("identity on a crisp number") {
    const double value = possibilistic_expected_utility(
        [](double x) { return x; }, FuzzyNumber::crisp(0.37), f2, rule64());
    CHECK(value == Catch::Approx(0.37).margin(1e-14));
  }
  SECTION("identity on the triangular example") {
    const double value = possibilistic_expected_utility(
        [](double x) { return x; }, FuzzyNumber::triangular(0.05, 0.2, 0.3), f2, rule64());
    CHECK(value == Catch::Approx(0.05 + 0.1 / 6.0).margin(1e-14));
  }
  SECTION("square on a symmetric centered triangular") {
    const double value = possibilistic_expected_utility(
        [](double x) { return x * x; }, FuzzyNumber::triangular(0.0, 0.3, 0.3), f2,
        rule64());
    CHECK(value == Catch::Approx(0.015).margin(1e-14));
  }
  SECTION("a utility undefined on the support names the endpoint") {
    const auto number = FuzzyNumber::triangular(0.0, 0.5, 0.5);
    CHECK_THROWS_WITH(
        possibilistic_expected_utility([](double x) { return std::log(x); }, number, f2,
                                       rule64()),
        Catch::Matchers::ContainsSubstring("endpoint"));
  }
}

TEST_CASE("expected value examples", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);
  CHECK(expected_value(FuzzyNumber::triangular(0.07, 0.25, 0.25), f2, rule64()) ==
        Catch::Approx(0.07).margin(1e-15));
  CHECK(expected_value(FuzzyNumber::triangular(0.05, 0.2, 0.3), f2, rule64()) ==
        Catch::Approx(0.05 + 0.1 / 6.0).margin(1e-14));
  CHECK(expected_value(FuzzyNumber::crisp(-1.25), f2, rule64()) == -1.25);
}

TEST_CASE("variance examples", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);
  CHECK(variance(FuzzyNumber::crisp(3.0), f2, rule64()) == 0.0);
  // (ls^2 + rs^2 + ls rs)/18, independent of the peak.
  for (const double peak : {-2.0, 0.0, 0.05, 5.0}) {
    CHECK(variance(FuzzyNumber::triangular(peak, 0.2, 0.3), f2, rule64()) ==
          Catch::Approx(0.19 / 18.0).margin(1e-12));
  }
  oracles::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto number = FuzzyNumber::triangular(rng.uniform(-1.0, 1.0),
                                                rng.uniform(0.0, 1.0),
                                                rng.uniform(0.0, 1.0));
    CHECK(variance(number, f2, rule64()) >= 0.0);
  }
}

TEST_CASE("raw moments", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);
  const auto number = FuzzyNumber::triangular(0.05, 0.2, 0.3);
  CHECK(nth_moment(number, f2, 1, rule64()) ==
        Catch::Approx(expected_value(number, f2, rule64())).margin(1e-15));
  CHECK(nth_moment(FuzzyNumber::crisp(2.0), f2, 3, rule64()) == 8.0);
  CHECK(nth_moment(FuzzyNumber::triangular(0.0, 0.2, 0.2), f2, 2, rule64()) ==
        Catch::Approx(0.12 / 18.0).margin(1e-14));
  CHECK_THROWS_AS(nth_moment(number, f2, 0, rule64()), std::invalid_argument);
}

TEST_CASE("central moments", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);

  SECTION("symmetric spreads annihilate the third central moment") {
    CHECK(std::abs(central_moment(FuzzyNumber::triangular(0.4, 0.25, 0.25), f2, 3,
                                  rule64())) <= 1e-14);
  }
  SECTION("third central moment is peak-invariant and matches the closed form") {
    const double expected = 19.0 * (0.027 - 0.008) / 1080.0 + 0.06 * 0.1 / 72.0;
    for (const double peak : {0.0, 0.05, -1.0, 10.0}) {
      CHECK(central_moment(FuzzyNumber::triangular(peak, 0.2, 0.3), f2, 3, rule64()) ==
            Catch::Approx(expected).margin(1e-10));
    }
    CHECK(expected == Catch::Approx(4.17593e-4).epsilon(1e-5));
  }
  SECTION("order two coincides with the variance") {
    const auto number = FuzzyNumber::triangular(0.1, 0.3, 0.15);
    CHECK(central_moment(number, f2, 2, rule64()) ==
          Catch::Approx(variance(number, f2, rule64())).margin(1e-15));
  }
  CHECK_THROWS_AS(central_moment(FuzzyNumber::crisp(1.0), f2, 1, rule64()),
                  std::invalid_argument);
}

TEST_CASE("triangular closed moments", "[fuzzy]") {
  const auto symmetric = triangular_closed_moments(0.0, 0.3, 0.3);
  CHECK(symmetric.mean == 0.0);
  CHECK(symmetric.variance == Catch::Approx(0.015).margin(1e-16));
  CHECK(symmetric.third_central == 0.0);

  const auto skewed = triangular_closed_moments(0.05, 0.2, 0.3);
  CHECK(skewed.mean == Catch::Approx(0.0666667).epsilon(1e-5));
  CHECK(skewed.variance == Catch::Approx(0.0105556).epsilon(1e-5));
  CHECK(skewed.third_central == Catch::Approx(4.17593e-4).epsilon(1e-5));

  const auto degenerate = triangular_closed_moments(1.5, 0.0, 0.0);
  CHECK(degenerate.mean == 1.5);
  CHECK(degenerate.variance == 0.0);
  CHECK(degenerate.third_central == 0.0);
}

TEST_CASE("closed moments agree with quadrature", "[fuzzy]") {
  const auto f2 = WeightingFunction::power(2.0);
  oracles::Rng rng(777001);
  for (int trial = 0; trial < 30; ++trial) {
    const double peak = rng.uniform(-1.0, 1.0);
    const double ls = rng.uniform(1e-3, 1.0);
    const double rs = rng.uniform(1e-3, 1.0);
    const auto number = FuzzyNumber::triangular(peak, ls, rs);
    const auto closed = triangular_closed_moments(peak, ls, rs);
    INFO("seed 777001 trial " << trial);
    CHECK(std::abs(expected_value(number, f2, rule64()) - closed.mean) <= 1e-10);
    CHECK(std::abs(variance(number, f2, rule64()) - closed.variance) <= 1e-10);
    CHECK(std::abs(central_moment(number, f2, 3, rule64()) - closed.third_central) <=
          1e-10);
  }
}

TEST_CASE("quadrature moments match hand-derived power-weighting formulas", "[fuzzy]") {
  oracles::Rng rng(424242);
  for (const double exponent : {1.0, 2.0, 3.0}) {
    const auto weighting = WeightingFunction::power(exponent);
    for (int trial = 0; trial < 10; ++trial) {
      const double c1 = rng.uniform(-0.5, 0.5);
      const double d = rng.uniform(0.0, 0.5);
      const double ls = rng.uniform(0.0, 0.8);
      const double rs = rng.uniform(0.0, 0.8);
      INFO("exponent " << exponent << " trial " << trial);

      const auto triangular = FuzzyNumber::triangular(c1, ls, rs);
      CHECK(expected_value(triangular, weighting, rule64()) ==
            Catch::Approx(oracles::power_mean_trapezoid(c1, c1, ls, rs, exponent))
                .margin(1e-12));
      CHECK(variance(triangular, weighting, rule64()) ==
            Catch::Approx(oracles::power_var_trapezoid(c1, c1, ls, rs, exponent))
                .margin(1e-12));

      const auto trapezoid = FuzzyNumber::trapezoidal(c1, c1 + 2.0 * d, ls, rs);
      CHECK(expected_value(trapezoid, weighting, rule64()) ==
            Catch::Approx(oracles::power_mean_trapezoid(c1, c1 + 2.0 * d, ls, rs, exponent))
                .margin(1e-12));
      CHECK(variance(trapezoid, weighting, rule64()) ==
            Catch::Approx(oracles::power_var_trapezoid(c1, c1 + 2.0 * d, ls, rs, exponent))
                .margin(1e-12));

      const auto crisp = FuzzyNumber::crisp(c1);
      CHECK(expected_value(crisp, weighting, rule64()) == c1);
      CHECK(variance(crisp, weighting, rule64()) == 0.0);
    }
  }
}

TEST_CASE("expected utility is linear in the utility", "[fuzzy]") {
  oracles::Rng rng(1357911);
  const auto weighting = WeightingFunction::power(2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const double p = rng.uniform(0.5, 2.0);
    const double q = rng.uniform(-1.0, 1.0);
    auto g = [p, q](double x) { return std::exp(p * x) + q * x; };
    auto h = [p, q](double x) { return std::sin(p * x) + q * x * x; };
    const auto number = FuzzyNumber::triangular(rng.uniform(-0.5, 0.5),
                                                rng.uniform(0.0, 0.6),
                                                rng.uniform(0.0, 0.6));
    const double combined = possibilistic_expected_utility(
        [&](double x) { return a * g(x) + b * h(x); }, number, weighting, rule64());
    const double separate =
        a * possibilistic_expected_utility(g, number, weighting, rule64()) +
        b * possibilistic_expected_utility(h, number, weighting, rule64());
    INFO("seed 1357911 trial " << trial);
    REQUIRE(std::abs(combined - separate) <= 1e-12);

    // Affine shift: E_f(a + b h(A)) = a + b E_f(h(A)).
    const double affine = possibilistic_expected_utility(
        [&](double x) { return a + b * h(x); }, number, weighting, rule64());
    REQUIRE(std::abs(affine -
                     (a + b * possibilistic_expected_utility(h, number, weighting,
                                                             rule64()))) <= 1e-12);
  }
}

TEST_CASE("shift covariance of the indicators", "[fuzzy]") {
  oracles::Rng rng(8675309);
  const auto weighting = WeightingFunction::power(2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto number = FuzzyNumber::triangular(rng.uniform(-0.5, 0.5),
                                                rng.uniform(0.0, 0.6),
                                                rng.uniform(0.0, 0.6));
    const double offset = rng.uniform(-1.0, 1.0);
    const auto moved = number.shifted(offset);
    INFO("seed 8675309 trial " << trial);
    REQUIRE(std::abs(expected_value(moved, weighting, rule64()) -
                     (expected_value(number, weighting, rule64()) + offset)) <= 1e-12);
    REQUIRE(std::abs(variance(moved, weighting, rule64()) -
                     variance(number, weighting, rule64())) <= 1e-12);
    REQUIRE(std::abs(central_moment(moved, weighting, 3, rule64()) -
                     central_moment(number, weighting, 3, rule64())) <= 1e-12);
  }
}
