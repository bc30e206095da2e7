#pragma once

// JSON run configuration: schema parsing with precise field paths, component
// construction with every invariant enforced at parse time, and canonical
// re-emission. The schema is documented in the README.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "possport/allocation.hpp"
#include "possport/errors.hpp"

namespace possport {

struct RunConfig {
  double wealth0 = 0.0;
  double risk_free_rate = 0.0;
  FuzzyNumber risky_return;  // the risky asset's return B0
  WeightingFunction weighting;
  UtilityFunction utility;
  std::optional<DiscreteRandomVariable> background_risk;
  int quadrature_order = kDefaultQuadratureOrder;
  double solver_tol = 1e-10;
  std::vector<double> sweep_premiums;  // sweep.k_values; empty when absent

  // w = w0 (1 + r), the future wealth of the risk-free strategy.
  double wealth() const { return wealth0 * (1.0 + risk_free_rate); }
  // B = B0 - r, the excess return.
  FuzzyNumber excess_return() const { return risky_return.shifted(-risk_free_rate); }
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const json* find_field(const json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

inline const json& require_field(const json& object, const std::string& path,
                                 const char* key) {
  const json* field = find_field(object, key);
  if (!field) throw ConfigError(join_path(path, key), "required field is missing");
  return *field;
}

inline void require_object(const json& value, const std::string& path) {
  if (!value.is_object()) throw ConfigError(path, "expected an object");
}

inline double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "number must be finite");
  return v;
}

inline std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ConfigError(path, "expected a string");
  return value.get<std::string>();
}

inline void reject_unknown_keys(const json& object, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(join_path(path, it.key()), "unknown field");
  }
}

inline std::vector<double> as_number_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> numbers;
  numbers.reserve(value.size());
  for (const auto& element : value) numbers.push_back(as_number(element, path));
  return numbers;
}

inline FuzzyNumber parse_fuzzy(const json& value, const std::string& path) {
  require_object(value, path);
  const std::string shape = as_string(require_field(value, path, "shape"),
                                      join_path(path, "shape"));
  try {
    if (shape == "triangular") {
      reject_unknown_keys(value, path, {"shape", "peak", "left_spread", "right_spread"});
      const double peak =
          as_number(require_field(value, path, "peak"), join_path(path, "peak"));
      const double left = as_number(require_field(value, path, "left_spread"),
                                    join_path(path, "left_spread"));
      const double right = as_number(require_field(value, path, "right_spread"),
                                     join_path(path, "right_spread"));
      if (left < 0.0)
        throw ConfigError(join_path(path, "left_spread"), "spread must be non-negative");
      if (right < 0.0)
        throw ConfigError(join_path(path, "right_spread"), "spread must be non-negative");
      return FuzzyNumber::triangular(peak, left, right);
    }
    if (shape == "trapezoidal") {
      reject_unknown_keys(value, path, {"shape", "core", "left_spread", "right_spread"});
      const auto core = as_number_array(require_field(value, path, "core"),
                                        join_path(path, "core"));
      if (core.size() != 2)
        throw ConfigError(join_path(path, "core"), "core must be an array [lower, upper]");
      if (!(core[0] <= core[1]))
        throw ConfigError(join_path(path, "core"), "core must satisfy lower <= upper");
      const double left = as_number(require_field(value, path, "left_spread"),
                                    join_path(path, "left_spread"));
      const double right = as_number(require_field(value, path, "right_spread"),
                                     join_path(path, "right_spread"));
      if (left < 0.0)
        throw ConfigError(join_path(path, "left_spread"), "spread must be non-negative");
      if (right < 0.0)
        throw ConfigError(join_path(path, "right_spread"), "spread must be non-negative");
      return FuzzyNumber::trapezoidal(core[0], core[1], left, right);
    }
    if (shape == "crisp") {
      reject_unknown_keys(value, path, {"shape", "value"});
      return FuzzyNumber::crisp(
          as_number(require_field(value, path, "value"), join_path(path, "value")));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join_path(path, "shape"),
                    "unknown shape '" + shape + "' (triangular | trapezoidal | crisp)");
}

inline WeightingFunction parse_weighting(const json* value, const std::string& path) {
  if (!value) return WeightingFunction::power(2.0);
  require_object(*value, path);
  reject_unknown_keys(*value, path, {"kind", "exponent"});
  const std::string kind =
      as_string(require_field(*value, path, "kind"), join_path(path, "kind"));
  if (kind != "power")
    throw ConfigError(join_path(path, "kind"),
                      "unknown kind '" + kind +
                          "' (only 'power' densities are configurable; custom densities "
                          "are library-only)");
  double exponent = 2.0;
  if (const json* e = find_field(*value, "exponent"))
    exponent = as_number(*e, join_path(path, "exponent"));
  if (!(exponent >= 1.0))
    throw ConfigError(join_path(path, "exponent"),
                      "weighting exponent must be >= 1 (the density n*gamma^(n-1) must be "
                      "non-decreasing); got " +
                          format_double(exponent));
  return WeightingFunction::power(exponent);
}

inline UtilityFunction parse_utility(const json& value, const std::string& path) {
  require_object(value, path);
  const std::string family =
      as_string(require_field(value, path, "family"), join_path(path, "family"));
  try {
    if (family == "hara") {
      reject_unknown_keys(value, path, {"family", "zeta", "eta", "gamma"});
      return UtilityFunction::hara(
          as_number(require_field(value, path, "zeta"), join_path(path, "zeta")),
          as_number(require_field(value, path, "eta"), join_path(path, "eta")),
          as_number(require_field(value, path, "gamma"), join_path(path, "gamma")));
    }
    if (family == "crra") {
      reject_unknown_keys(value, path, {"family", "gamma"});
      return UtilityFunction::crra(
          as_number(require_field(value, path, "gamma"), join_path(path, "gamma")));
    }
    if (family == "cara") {
      reject_unknown_keys(value, path, {"family", "a"});
      return UtilityFunction::cara(
          as_number(require_field(value, path, "a"), join_path(path, "a")));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join_path(path, "family"),
                    "unknown family '" + family + "' (hara | crra | cara)");
}

inline DiscreteRandomVariable parse_background(const json& value, const std::string& path) {
  require_object(value, path);
  reject_unknown_keys(value, path, {"outcomes", "probabilities"});
  auto outcomes = as_number_array(require_field(value, path, "outcomes"),
                                  join_path(path, "outcomes"));
  auto probabilities = as_number_array(require_field(value, path, "probabilities"),
                                       join_path(path, "probabilities"));
  const std::string prob_path = join_path(path, "probabilities");
  if (outcomes.empty()) throw ConfigError(join_path(path, "outcomes"), "must be non-empty");
  if (outcomes.size() != probabilities.size())
    throw ConfigError(prob_path, "outcomes and probabilities must have the same length");
  double sum = 0.0;
  for (const double p : probabilities) {
    if (p < 0.0) throw ConfigError(prob_path, "probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError(prob_path,
                      "probabilities must sum to 1; got " + format_double(sum, 17));
  try {
    return DiscreteRandomVariable(std::move(outcomes), std::move(probabilities));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("not valid JSON: ") + e.what());
  }
  if (!document.is_object()) throw ConfigError("$", "top level must be an object");
  detail::reject_unknown_keys(document, "",
                              {"wealth0", "risk_free_rate", "risky_return", "weighting",
                               "utility", "background_risk", "quadrature_order",
                               "solver_tol", "sweep"});

  const double wealth0 =
      detail::as_number(detail::require_field(document, "", "wealth0"), "wealth0");
  const double rate = detail::as_number(
      detail::require_field(document, "", "risk_free_rate"), "risk_free_rate");
  FuzzyNumber risky = detail::parse_fuzzy(
      detail::require_field(document, "", "risky_return"), "risky_return");
  WeightingFunction weighting =
      detail::parse_weighting(detail::find_field(document, "weighting"), "weighting");
  UtilityFunction utility =
      detail::parse_utility(detail::require_field(document, "", "utility"), "utility");

  std::optional<DiscreteRandomVariable> background;
  if (const detail::json* bg = detail::find_field(document, "background_risk"))
    background = detail::parse_background(*bg, "background_risk");

  int order = kDefaultQuadratureOrder;
  if (const detail::json* q = detail::find_field(document, "quadrature_order")) {
    if (!q->is_number_integer())
      throw ConfigError("quadrature_order", "expected an integer");
    const long long requested = q->get<long long>();
    if (requested < 1 || requested > kMaxQuadratureOrder)
      throw ConfigError("quadrature_order", "must lie in [1, 512]; got " +
                                                std::to_string(requested));
    order = static_cast<int>(requested);
  }

  double tol = 1e-10;
  if (const detail::json* t = detail::find_field(document, "solver_tol")) {
    tol = detail::as_number(*t, "solver_tol");
    if (!(tol > 0.0)) throw ConfigError("solver_tol", "must be positive");
  }

  std::vector<double> sweep;
  if (const detail::json* s = detail::find_field(document, "sweep")) {
    detail::require_object(*s, "sweep");
    detail::reject_unknown_keys(*s, "sweep", {"k_values"});
    sweep = detail::as_number_array(detail::require_field(*s, "sweep", "k_values"),
                                    "sweep.k_values");
    if (sweep.empty()) throw ConfigError("sweep.k_values", "must be non-empty");
    for (const double k : sweep)
      if (!(k > 0.0))
        throw ConfigError("sweep.k_values", "every premium must be positive; got " +
                                                detail::format_double(k));
  }

  return RunConfig{wealth0,
                   rate,
                   std::move(risky),
                   std::move(weighting),
                   std::move(utility),
                   std::move(background),
                   order,
                   tol,
                   std::move(sweep)};
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw ConfigError("$", "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_config(buffer.str());
}

// Canonical JSON for a parsed configuration. Only the configurable families
// are representable: a config round-trips, a library-built custom component
// does not.
inline std::string emit_config(const RunConfig& config) {
  using detail::json;
  json document;
  document["wealth0"] = config.wealth0;
  document["risk_free_rate"] = config.risk_free_rate;

  json risky;
  switch (config.risky_return.shape()) {
    case FuzzyNumber::Shape::triangular:
      risky["shape"] = "triangular";
      risky["peak"] = config.risky_return.core_lower();
      risky["left_spread"] = config.risky_return.left_spread();
      risky["right_spread"] = config.risky_return.right_spread();
      break;
    case FuzzyNumber::Shape::trapezoidal:
      risky["shape"] = "trapezoidal";
      risky["core"] = {config.risky_return.core_lower(), config.risky_return.core_upper()};
      risky["left_spread"] = config.risky_return.left_spread();
      risky["right_spread"] = config.risky_return.right_spread();
      break;
    case FuzzyNumber::Shape::crisp:
      risky["shape"] = "crisp";
      risky["value"] = config.risky_return.core_lower();
      break;
  }
  document["risky_return"] = std::move(risky);

  if (config.weighting.kind() != WeightingFunction::Kind::power)
    throw std::logic_error("custom weighting densities cannot be serialized to config");
  document["weighting"] = {{"kind", "power"}, {"exponent", config.weighting.exponent()}};

  json utility;
  const auto& params = config.utility.parameters();
  switch (config.utility.family()) {
    case UtilityFunction::Family::hara:
      utility = {{"family", "hara"},
                 {"zeta", params.zeta},
                 {"eta", params.eta},
                 {"gamma", params.gamma}};
      break;
    case UtilityFunction::Family::crra:
      utility = {{"family", "crra"}, {"gamma", params.gamma}};
      break;
    case UtilityFunction::Family::cara:
      utility = {{"family", "cara"}, {"a", params.absolute_risk_aversion}};
      break;
    case UtilityFunction::Family::custom:
      throw std::logic_error("custom utilities cannot be serialized to config");
  }
  document["utility"] = std::move(utility);

  if (config.background_risk) {
    const auto outcomes = config.background_risk->outcomes();
    const auto probabilities = config.background_risk->probabilities();
    document["background_risk"] = {
        {"outcomes", std::vector<double>(outcomes.begin(), outcomes.end())},
        {"probabilities", std::vector<double>(probabilities.begin(), probabilities.end())}};
  }

  document["quadrature_order"] = config.quadrature_order;
  document["solver_tol"] = config.solver_tol;
  if (!config.sweep_premiums.empty())
    document["sweep"] = {{"k_values", config.sweep_premiums}};

  return document.dump(2) + "\n";
}

}  // namespace possport
