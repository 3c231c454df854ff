#pragma once

// Five-point central stencils with one Richardson level.

#include <algorithm>
#include <cmath>

namespace thermoqfi::numdiff {

inline double temperature_step(double t) { return std::max(1e-4, 1e-3 * t); }
inline double parameter_step(double lambda) { return 1e-4 * (1.0 + std::abs(lambda)); }

template <class F>
double first(F&& f, double x, double h) {
  auto stencil = [&](double s) {
    return (-f(x + 2.0 * s) + 8.0 * f(x + s) - 8.0 * f(x - s) + f(x - 2.0 * s)) / (12.0 * s);
  };
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

template <class F>
double second(F&& f, double x, double h) {
  const double f0 = f(x);
  auto stencil = [&](double s) {
    return (-f(x + 2.0 * s) + 16.0 * f(x + s) - 30.0 * f0 + 16.0 * f(x - s) - f(x - 2.0 * s)) / (12.0 * s * s);
  };
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

}  // namespace thermoqfi::numdiff
