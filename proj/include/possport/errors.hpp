#pragma once

// Exception types shared across the library, plus the locale-independent
// number formatting used in messages and reports.

#include <charconv>
#include <stdexcept>
#include <string>

namespace possport {
namespace detail {

// %.{significant}g via std::to_chars: deterministic, '.' decimal separator,
// independent of the global locale.
inline std::string format_double(double value, int significant = 12) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value,
                                    std::chars_format::general, significant);
  return std::string(buffer, result.ptr);
}

}  // namespace detail

// Base class for errors that carry structured context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration document violated the schema or a component invariant.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error("config error at '" + path + "': " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// A requested allocation leaves the utility domain somewhere on the support.
class FeasibilityError : public Error {
 public:
  FeasibilityError(double alpha, double lower, double upper)
      : Error("alpha = " + detail::format_double(alpha) +
              " lies outside the domain-feasible interval (" + detail::format_double(lower) +
              ", " + detail::format_double(upper) + ")"),
        lower_(lower),
        upper_(upper) {}

  double feasible_lower() const noexcept { return lower_; }
  double feasible_upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

// The first-order condition has no interior root: marginal total utility
// stays positive all the way to the feasible search bound (the utility-domain
// limit, or the search cap when the domain is unbounded), so the optimum is a
// boundary allocation.
class BoundaryError : public Error {
 public:
  explicit BoundaryError(double feasible_upper)
      : Error("no interior optimum: marginal total utility stays positive up to the feasible "
              "bound alpha = " +
              detail::format_double(feasible_upper)),
        feasible_upper_(feasible_upper) {}

  double feasible_upper() const noexcept { return feasible_upper_; }

 private:
  double feasible_upper_;
};

// 1 - M(Z) P_u(w) vanished: the second-order term of the mixed approximation
// is singular. Reported, never regularized.
class PoleError : public Error {
 public:
  using Error::Error;
};

// A formula input degenerated (zero possibilistic variance, risk-neutral
// point, ...).
class SingularError : public Error {
 public:
  using Error::Error;
};

// The root finder could not meet its tolerances.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace possport
