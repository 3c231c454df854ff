#pragma once

// Inverse-power series in T fitted to high-temperature sweeps.

#include <span>
#include <vector>

namespace thermoqfi {

struct Sample {
  double t = 0.0;
  double value = 0.0;
};

/// f(T) = sum_n c_n T^{-n}.
struct InverseSeries {
  std::vector<int> powers;
  std::vector<double> coefficients;

  double evaluate(double t) const;
  /// c_n, or 0 if n is not in the basis.
  double coefficient(int n) const;
  /// d/dT: c_n T^{-n} -> -n c_n T^{-n-1}.
  InverseSeries derivative() const;
  /// T f(T): c_n T^{-n} -> c_n T^{-(n-1)}.
  InverseSeries times_t() const;
  InverseSeries scaled(double s) const;
};

struct SeriesFit {
  InverseSeries series;
  std::vector<double> sensitivity;  // leave-one-out spread per coefficient
  double residual = 0.0;            // max relative residual on the grid
  double condition = 0.0;           // of the scaled design matrix
  std::vector<double> grid;

  double coefficient(int n) const { return series.coefficient(n); }
  double evaluate(double t) const { return series.evaluate(t); }
};

/// Weighted least squares in u = T_min/T with rows scaled by u^{-min power}.
/// Requires at least powers + 2 samples with distinct positive T; throws
/// NumericalError if the condition number exceeds 1e10.
SeriesFit fit_inverse_powers(std::span<const Sample> samples, const std::vector<int>& powers);

struct ScaledLimit {
  double limit = 0.0;
  double rate = 0.0;      // coefficient of the next order, T^n f = limit + rate/T + ...
  double residual = 0.0;  // relative to max |T^n f|
};

/// lim T^n f(T), extrapolated by a quadratic fit in 1/T. Needs a monotone
/// grid with at least 4 points; a residual above 1e-3 raises DiagnosticError.
ScaledLimit scaled_limit(std::span<const Sample> samples, int power);

/// `count` points from tmin to tmax in geometric progression.
std::vector<double> geometric_grid(double tmin, double tmax, int count);

}  // namespace thermoqfi
