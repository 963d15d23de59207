#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinn {

enum class Boundary { Outflow, ZeroFlux };

inline std::string to_string(Boundary b) {
  return b == Boundary::Outflow ? "outflow" : "zero_flux";
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 0;

  double dx() const { return (hi - lo) / cells; }
  double center(int i) const { return lo + (i + 0.5) * dx(); }
  double edge(int i) const { return lo + i * dx(); }  // interface i in [0, cells]

  /// Cell index with half-open cells [edge_i, edge_{i+1}); the top edge
  /// belongs to the last cell so the full closed interval is representable.
  /// Returns -1 when x falls outside.
  int locate(double x) const {
    if (x < lo || x > hi) return -1;
    if (x == hi) return cells - 1;
    return static_cast<int>((x - lo) / dx());
  }
};

/// Uniform 1D or 2D grid. CWENO needs a 3-cell stencil plus two ghosts, hence
/// the 8-cell minimum per axis.
struct Grid {
  int dim = 1;
  Axis x;
  Axis y;  // ignored when dim == 1

  static Grid make1d(double lo, double hi, int cells) {
    Grid g;
    g.dim = 1;
    g.x = {lo, hi, cells};
    g.validate();
    return g;
  }
  static Grid make2d(const Axis& ax, const Axis& ay) {
    Grid g;
    g.dim = 2;
    g.x = ax;
    g.y = ay;
    g.validate();
    return g;
  }

  void validate() const {
    auto check = [](const Axis& a, const char* name) {
      if (a.cells < 8)
        throw std::invalid_argument(std::string("grid: axis ") + name +
                                    " needs at least 8 cells");
      if (!(a.hi > a.lo))
        throw std::invalid_argument(std::string("grid: axis ") + name +
                                    " has non-positive extent");
    };
    check(x, "x");
    if (dim == 2) check(y, "y");
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  }

  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(x.cells)
                    : static_cast<std::size_t>(x.cells) * y.cells;
  }
  double cell_volume() const { return dim == 1 ? x.dx() : x.dx() * y.dx(); }

  bool operator==(const Grid& o) const {
    auto eq = [](const Axis& a, const Axis& b) {
      return a.lo == b.lo && a.hi == b.hi && a.cells == b.cells;
    };
    return dim == o.dim && eq(x, o.x) && (dim == 1 || eq(y, o.y));
  }
};

/// Cell-averaged density (or any cell-averaged scalar) on a Grid.
struct DensityField {
  Grid grid;
  Boundary bc = Boundary::Outflow;
  std::vector<double> v;  // 2D layout: v[j * nx + i]

  DensityField() = default;
  DensityField(const Grid& g, Boundary b, double fill = 0.0)
      : grid(g), bc(b), v(g.size(), fill) {}

  double& at(int i) { return v[i]; }
  double at(int i) const { return v[i]; }
  double& at(int i, int j) { return v[static_cast<std::size_t>(j) * grid.x.cells + i]; }
  double at(int i, int j) const {
    return v[static_cast<std::size_t>(j) * grid.x.cells + i];
  }

  double mass() const {
    double s = 0.0;
    for (double u : v) s += u;
    return s * grid.cell_volume();
  }

  double min_value() const {
    double m = v.empty() ? 0.0 : v[0];
    for (double u : v) m = std::min(m, u);
    return m;
  }

  void normalize_mass(double target = 1.0) {
    const double m = mass();
    if (m <= 0.0) throw std::runtime_error("density field: non-positive mass");
    const double s = target / m;
    for (double& u : v) u *= s;
  }

  bool finite() const {
    for (double u : v)
      if (!std::isfinite(u)) return false;
    return true;
  }
};

/// Midpoint-rule moment  m_k = sum_j x_j^k u_j dx  (1D fields).
inline double field_moment(const DensityField& f, int k) {
  if (f.grid.dim != 1) throw std::invalid_argument("field_moment: 1D only");
  if (k < 0) throw std::invalid_argument("field_moment: k must be >= 0");
  double s = 0.0;
  for (int i = 0; i < f.grid.x.cells; ++i)
    s += std::pow(f.grid.x.center(i), k) * f.at(i);
  return s * f.grid.x.dx();
}

inline double field_variance(const DensityField& f) {
  const double m1 = field_moment(f, 1);
  return field_moment(f, 2) - m1 * m1;
}

/// Second moment about a point, sum over cells of |x - p|^2 u dV (1D or 2D).
inline double second_moment_about(const DensityField& f, double px, double py = 0.0) {
  double s = 0.0;
  if (f.grid.dim == 1) {
    for (int i = 0; i < f.grid.x.cells; ++i) {
      const double d = f.grid.x.center(i) - px;
      s += d * d * f.at(i);
    }
  } else {
    for (int j = 0; j < f.grid.y.cells; ++j)
      for (int i = 0; i < f.grid.x.cells; ++i) {
        const double dx = f.grid.x.center(i) - px;
        const double dy = f.grid.y.center(j) - py;
        s += (dx * dx + dy * dy) * f.at(i, j);
      }
  }
  return s * f.grid.cell_volume();
}

/// Mass inside the window [a, b] (1D), counting partial cell overlap.
inline double mass_in_window(const DensityField& f, double a, double b) {
  if (f.grid.dim != 1) throw std::invalid_argument("mass_in_window: 1D only");
  double s = 0.0;
  for (int i = 0; i < f.grid.x.cells; ++i) {
    const double l = f.grid.x.edge(i), r = f.grid.x.edge(i + 1);
    const double overlap = std::max(0.0, std::min(b, r) - std::max(a, l));
    s += f.at(i) * overlap;
  }
  return s;
}

}  // namespace kinn
