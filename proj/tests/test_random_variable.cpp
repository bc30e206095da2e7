#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "possport/random_variable.hpp"
#include "support/oracles.hpp"

using possport::DiscreteRandomVariable;
using possport::FuzzyNumber;
using possport::WeightingFunction;
using possport::expect;
using possport::gauss_legendre_01;
using possport::mean;
using possport::mixed_expected_utility;
using possport::nth_moment;
using possport::possibilistic_expected_utility;

namespace {
const possport::QuadratureRule& rule64() {
  static const auto rule = gauss_legendre_01(64);
  return rule;
}
}  // namespace

TEST_CASE("distribution validation", "[randvar]") {
  CHECK_NOTHROW(DiscreteRandomVariable({-0.1, 0.1}, {0.5, 0.5}));
  CHECK_NOTHROW(DiscreteRandomVariable({0.0, 0.0}, {0.3, 0.7}));  // duplicates merge
  CHECK_THROWS_AS(DiscreteRandomVariable({0.0, 1.0}, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteRandomVariable({0.0, 1.0}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteRandomVariable({0.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteRandomVariable({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteRandomVariable({std::nan("")}, {1.0}), std::invalid_argument);
}

TEST_CASE("mean", "[randvar]") {
  CHECK(mean(DiscreteRandomVariable::constant(0.7)) == 0.7);
  CHECK(mean(DiscreteRandomVariable({-0.1, 0.1}, {0.5, 0.5})) == 0.0);
  CHECK(mean(DiscreteRandomVariable({0.0, 1.0, 2.0}, {0.2, 0.5, 0.3})) ==
        Catch::Approx(1.1).margin(1e-15));
}

TEST_CASE("expectation of a transform", "[randvar]") {
  const DiscreteRandomVariable z({-0.1, 0.1}, {0.5, 0.5});
  CHECK(expect([](double x) { return x; }, z) == Catch::Approx(mean(z)).margin(1e-16));
  CHECK(expect([](double x) { return x * x; }, z) == Catch::Approx(0.01).margin(1e-16));
  CHECK(expect([](double) { return 1.0; }, z) == Catch::Approx(1.0).margin(1e-16));
  CHECK_THROWS_WITH(expect([](double x) { return std::log(x); }, z),
                    Catch::Matchers::ContainsSubstring("outcome"));
}

TEST_CASE("mixed expected utility on a crisp fuzzy component", "[randvar]") {
  const auto f2 = WeightingFunction::power(2.0);
  const DiscreteRandomVariable z({-0.2, 0.3}, {0.4, 0.6});
  auto u2 = [](double x, double zi) { return std::exp(x) * zi + x * zi * zi; };
  const double via_mixed =
      mixed_expected_utility(u2, FuzzyNumber::crisp(0.8), z, f2, rule64());
  const double direct = expect([&](double zi) { return u2(0.8, zi); }, z);
  CHECK(via_mixed == Catch::Approx(direct).margin(1e-14));
}

TEST_CASE("product identities", "[randvar]") {
  const auto f2 = WeightingFunction::power(2.0);
  oracles::Rng rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    const auto number = FuzzyNumber::triangular(rng.uniform(-0.5, 0.5),
                                                rng.uniform(0.0, 0.8),
                                                rng.uniform(0.0, 0.8));
    const double z1 = rng.uniform(-1.0, 1.0);
    const double z2 = rng.uniform(-1.0, 1.0);
    const double p = rng.uniform(0.05, 0.95);
    const DiscreteRandomVariable z({z1, z2}, {p, 1.0 - p});
    INFO("seed 5150 trial " << trial);

    const double product = mixed_expected_utility(
        [](double x, double zi) { return x * zi; }, number, z, f2, rule64());
    REQUIRE(std::abs(product - mean(z) * possibilistic_expected_utility(
                                             [](double x) { return x; }, number, f2,
                                             rule64())) <= 1e-12);

    const double square_product = mixed_expected_utility(
        [](double x, double zi) { return x * x * zi; }, number, z, f2, rule64());
    REQUIRE(std::abs(square_product - mean(z) * nth_moment(number, f2, 2, rule64())) <=
            1e-12);
  }
}

TEST_CASE("mixed expected utility is linear in the utility", "[randvar]") {
  const auto f2 = WeightingFunction::power(2.0);
  oracles::Rng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const double c = rng.uniform(0.5, 1.5);
    auto g = [c](double x, double z) { return std::exp(c * x) * (1.0 + z); };
    auto h = [c](double x, double z) { return std::sin(c * x) + x * z * z; };
    const auto number = FuzzyNumber::triangular(rng.uniform(-0.5, 0.5),
                                                rng.uniform(0.0, 0.6),
                                                rng.uniform(0.0, 0.6));
    const double z1 = rng.uniform(-0.5, 0.5);
    const double z2 = rng.uniform(-0.5, 0.5);
    const double p = rng.uniform(0.1, 0.9);
    const DiscreteRandomVariable z({z1, z2}, {p, 1.0 - p});
    const double combined = mixed_expected_utility(
        [&](double x, double zi) { return a * g(x, zi) + b * h(x, zi); }, number, z, f2,
        rule64());
    const double separate = a * mixed_expected_utility(g, number, z, f2, rule64()) +
                            b * mixed_expected_utility(h, number, z, f2, rule64());
    INFO("seed 31337 trial " << trial);
    REQUIRE(std::abs(combined - separate) <= 1e-12);
  }
}

TEST_CASE("degenerate background risk reduces to the possibilistic case", "[randvar]") {
  const auto f2 = WeightingFunction::power(2.0);
  const auto number = FuzzyNumber::triangular(0.05, 0.2, 0.3);
  auto u2 = [](double x, double z) { return std::exp(x + z) + x * z; };
  for (const double c : {-0.3, 0.0, 0.4}) {
    const double via_mixed = mixed_expected_utility(
        u2, number, DiscreteRandomVariable::constant(c), f2, rule64());
    const double via_possibilistic = possibilistic_expected_utility(
        [&](double x) { return u2(x, c); }, number, f2, rule64());
    CHECK(via_mixed == Catch::Approx(via_possibilistic).margin(1e-12));
  }
}
