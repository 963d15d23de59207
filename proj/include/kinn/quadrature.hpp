#pragma once

#include <cmath>

namespace kinn {

// 3-point Gauss-Legendre nodes/weights on [-1/2, 1/2], weights summing to 1.
inline constexpr double kGauss3Node = 0.3872983346207417;  // sqrt(3/5)/2
inline constexpr double kGauss3W0 = 5.0 / 18.0;
inline constexpr double kGauss3W1 = 8.0 / 18.0;

/// Cell average (1/dx) * int_{a}^{a+dx} f, exact up to degree 5.
template <class F>
double gauss3_cell_average(F&& f, double a, double dx) {
  const double xm = a + 0.5 * dx;
  return kGauss3W0 * f(xm - kGauss3Node * dx) + kGauss3W1 * f(xm) +
         kGauss3W0 * f(xm + kGauss3Node * dx);
}

/// Composite Simpson integral of f over [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace kinn
