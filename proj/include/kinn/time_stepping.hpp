#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "kinn/grid.hpp"

namespace kinn {

/// Shu-Osher three-stage SSP-RK3. `rhs(u, t, out)` writes d/dt of the cell
/// averages into `out`.
template <class Rhs>
DensityField ssprk3_step(const DensityField& u, double t, double dt, Rhs&& rhs) {
  const std::size_t n = u.v.size();
  std::vector<double> k(n);

  DensityField u1 = u;
  rhs(u, t, k);
  for (std::size_t i = 0; i < n; ++i) u1.v[i] = u.v[i] + dt * k[i];

  DensityField u2 = u1;
  rhs(u1, t + dt, k);
  for (std::size_t i = 0; i < n; ++i)
    u2.v[i] = 0.75 * u.v[i] + 0.25 * (u1.v[i] + dt * k[i]);

  DensityField out = u2;
  rhs(u2, t + 0.5 * dt, k);
  for (std::size_t i = 0; i < n; ++i)
    out.v[i] = (1.0 / 3.0) * u.v[i] + (2.0 / 3.0) * (u2.v[i] + dt * k[i]);
  return out;
}

/// CFL time step: dt = cfl * min(dx/max_speed, dx^2/(2 D)). A vanishing
/// denominator disables that restriction.
inline double adaptive_dt(const DensityField& state, double max_speed,
                          double diffusion_coeff, double cfl = 0.45) {
  if (max_speed < 0.0) throw std::invalid_argument("adaptive_dt: negative speed");
  const double dx = state.grid.x.dx();
  const double inf = std::numeric_limits<double>::infinity();
  const double conv = max_speed > 0.0 ? dx / max_speed : inf;
  const double diff = diffusion_coeff > 0.0 ? dx * dx / (2.0 * diffusion_coeff) : inf;
  const double dt = cfl * std::min(conv, diff);
  if (!std::isfinite(dt))
    throw std::invalid_argument("adaptive_dt: no dynamics (zero speed and diffusion)");
  return dt;
}

}  // namespace kinn
