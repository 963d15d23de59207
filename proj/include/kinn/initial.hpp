#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kinn/grid.hpp"
#include "kinn/quadrature.hpp"

namespace kinn {

inline double gaussian_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

/// Cell averages of a smooth pdf via 3-point Gauss quadrature, then
/// renormalized so the discrete mass is exactly 1.
inline DensityField discretize_pdf(const Grid& grid, Boundary bc,
                                   const std::function<double(double)>& pdf) {
  if (grid.dim != 1) throw std::invalid_argument("discretize_pdf: 1D only");
  DensityField f(grid, bc);
  for (int i = 0; i < grid.x.cells; ++i)
    f.at(i) = gauss3_cell_average(pdf, grid.x.edge(i), grid.x.dx());
  f.normalize_mass();
  return f;
}

inline DensityField discretize_pdf2d(
    const Grid& grid, Boundary bc,
    const std::function<double(double, double)>& pdf) {
  if (grid.dim != 2) throw std::invalid_argument("discretize_pdf2d: 2D only");
  DensityField f(grid, bc);
  const double dx = grid.x.dx(), dy = grid.y.dx();
  for (int j = 0; j < grid.y.cells; ++j)
    for (int i = 0; i < grid.x.cells; ++i) {
      const double xl = grid.x.edge(i);
      f.at(i, j) = gauss3_cell_average(
          [&](double yy) {
            return gauss3_cell_average([&](double xx) { return pdf(xx, yy); }, xl, dx);
          },
          grid.y.edge(j), dy);
    }
  f.normalize_mass();
  return f;
}

inline DensityField gaussian_field(const Grid& grid, Boundary bc, double mean,
                                   double variance) {
  return discretize_pdf(grid, bc,
                        [=](double x) { return gaussian_pdf(x, mean, variance); });
}

/// Uniform density on [a, b]; straddling cells receive the exact overlap.
inline DensityField uniform_field(const Grid& grid, Boundary bc, double a, double b) {
  if (grid.dim != 1) throw std::invalid_argument("uniform_field: 1D only");
  if (!(b > a)) throw std::invalid_argument("uniform_field: b must exceed a");
  DensityField f(grid, bc);
  const double h = 1.0 / (b - a);
  for (int i = 0; i < grid.x.cells; ++i) {
    const double l = grid.x.edge(i), r = grid.x.edge(i + 1);
    const double overlap = std::max(0.0, std::min(b, r) - std::max(a, l));
    f.at(i) = h * overlap / grid.x.dx();
  }
  f.normalize_mass();
  return f;
}

}  // namespace kinn
