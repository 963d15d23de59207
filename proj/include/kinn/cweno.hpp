#pragma once

#include "kinn/quadrature.hpp"

namespace kinn {

/// Reconstruction polynomial on one cell in the local coordinate
/// xi = (x - x_j)/dx, xi in [-1/2, 1/2]:  R(xi) = a0 + a1 xi + a2 xi^2.
struct CwenoPoly {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;

  double at(double xi) const { return a0 + xi * (a1 + xi * a2); }
  double left() const { return a0 - 0.5 * a1 + 0.25 * a2; }    // x_{j-1/2}
  double right() const { return a0 + 0.5 * a1 + 0.25 * a2; }   // x_{j+1/2}
  double center() const { return a0; }
  double cell_average() const { return a0 + a2 / 12.0; }
};

/// Third-order CWENO reconstruction from the 3-cell stencil (um, u0, up).
/// Linear weights (1/4, 1/2, 1/4) for (left linear, central parabola, right
/// linear); Jiang-Shu smoothness indicators; eps_weno = dx^2 keeps full order
/// at smooth extrema. The reconstruction preserves the cell average exactly.
inline CwenoPoly cweno3_reconstruct(double um, double u0, double up, double dx) {
  const double dL = u0 - um;
  const double dR = up - u0;
  const double d1 = 0.5 * (up - um);
  const double d2 = up - 2.0 * u0 + um;

  // candidate polynomials: P_L = u0 + dL*xi, P_R = u0 + dR*xi,
  // P_C = (P_opt - cL P_L - cR P_R)/cC with P_opt the interpolating parabola
  const double isL = dL * dL;
  const double isR = dR * dR;
  const double isC = d1 * d1 + 13.0 / 3.0 * d2 * d2;

  const double eps = dx * dx;
  const double aL = 0.25 / ((eps + isL) * (eps + isL));
  const double aR = 0.25 / ((eps + isR) * (eps + isR));
  const double aC = 0.50 / ((eps + isC) * (eps + isC));
  const double inv = 1.0 / (aL + aR + aC);
  const double wL = aL * inv, wR = aR * inv, wC = aC * inv;

  // P_C coefficients: u0 - d2/12 + d1*xi + d2*xi^2
  CwenoPoly p;
  p.a0 = wL * u0 + wR * u0 + wC * (u0 - d2 / 12.0);
  p.a1 = wL * dL + wR * dR + wC * d1;
  p.a2 = wC * d2;
  return p;
}

}  // namespace kinn
