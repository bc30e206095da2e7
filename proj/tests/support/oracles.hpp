#pragma once

// Shared test oracles, independent of the library's implementation paths:
// a composite-Simpson integrator, finite-difference stencils, seeded random
// helpers, and hand-derived moment formulas for power weightings.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracles {

// Composite Simpson on [0, 1]; panels must be even.
template <class F>
double composite_simpson_01(F&& f, int panels = 2000) {
  const double h = 1.0 / panels;
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 0 ? 2.0 : 4.0) * f(i * h);
  return sum * h / 3.0;
}

template <class F>
double central_diff1(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double central_diff2(F&& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine);
  }
  std::mt19937_64 engine;
};

// E_f and Var_f of a trapezoidal number (core [c1, c2], spreads ls/rs) under
// the power density f(gamma) = n gamma^(n-1), derived by direct integration:
//   E   = (c1+c2)/2 + (rs-ls)/(2(n+1))
//   Var = d^2 + d(ls+rs)/(n+1) + (ls^2+rs^2)/((n+1)(n+2)) - (rs-ls)^2/(4(n+1)^2)
// with d = (c2-c1)/2. Triangular numbers are the c1 = c2 case.
inline double power_mean_trapezoid(double c1, double c2, double ls, double rs, double n) {
  return 0.5 * (c1 + c2) + (rs - ls) / (2.0 * (n + 1.0));
}

inline double power_var_trapezoid(double c1, double c2, double ls, double rs, double n) {
  const double d = 0.5 * (c2 - c1);
  return d * d + d * (ls + rs) / (n + 1.0) +
         (ls * ls + rs * rs) / ((n + 1.0) * (n + 2.0)) -
         (rs - ls) * (rs - ls) / (4.0 * (n + 1.0) * (n + 1.0));
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracles
