#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kinn/cweno.hpp"
#include "kinn/grid.hpp"
#include "kinn/quadrature.hpp"

namespace kinn {

/// Local Lax-Friedrichs flux for the linear-in-u flux F(u) = velocity * u.
inline double llf_flux(double u_minus, double u_plus, double velocity) {
  return 0.5 * velocity * (u_minus + u_plus) -
         0.5 * std::abs(velocity) * (u_plus - u_minus);
}

namespace detail {

// Fourth-order diffusive interface flux from the 5-point stencil written in
// conservation form: summing Q_{j+1/2} - Q_{j-1/2} recovers
// (-h_{j-2} + 16 h_{j-1} - 30 h_j + 16 h_{j+1} - h_{j+2}) / (12 dx^2),
// so the discrete diffusion telescopes and conserves mass exactly.
inline double diff_flux4(double hm1, double h0, double h1, double h2, double dx) {
  return (hm1 - 15.0 * h0 + 15.0 * h1 - h2) / (12.0 * dx);
}

// Ghost filling into a work buffer of size n+4 (cells -2..n+1).
inline void fill_ghosts(const double* u, int n, Boundary bc, std::vector<double>& w) {
  w.resize(n + 4);
  for (int i = 0; i < n; ++i) w[i + 2] = u[i];
  if (bc == Boundary::ZeroFlux) {  // mirror reflection
    w[1] = u[0];
    w[0] = u[1];
    w[n + 2] = u[n - 1];
    w[n + 3] = u[n - 2];
  } else {  // zeroth-order extrapolation
    w[1] = w[0] = u[0];
    w[n + 2] = w[n + 3] = u[n - 1];
  }
}

}  // namespace detail

/// Cell averages of coefficient * u_xx via the explicit fourth-order central
/// stencil on cell averages (fourth-order accurate for the cell average of
/// the second derivative). Boundary handling matches the solver: ZeroFlux
/// mirrors ghosts (which nulls the wall flux), Outflow extrapolates.
inline std::vector<double> diffusion_4th(const std::vector<double>& cell_averages,
                                         double dx, double coefficient,
                                         Boundary bc = Boundary::Outflow) {
  const int n = static_cast<int>(cell_averages.size());
  if (n < 5) throw std::invalid_argument("diffusion_4th: need at least 5 cells");
  std::vector<double> w;
  detail::fill_ghosts(cell_averages.data(), n, bc, w);
  std::vector<double> q(n + 1);
  for (int i = 0; i <= n; ++i)
    q[i] = coefficient * detail::diff_flux4(w[i], w[i + 1], w[i + 2], w[i + 3], dx);
  if (bc == Boundary::ZeroFlux) q[0] = q[n] = 0.0;
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = (q[j + 1] - q[j]) / dx;
  return out;
}

/// Semidiscrete operator for
///   d/dt u + d/dx( velocity(t,x) u ) = d^2/dx^2( diffusion(x) u ) + source(t,x) u
/// with CWENO3 boundary values, LLF advective flux and the fourth-order
/// diffusive flux, all assembled in conservation form.
class Transport1D {
 public:
  using Velocity = std::function<double(double t, double x)>;
  using Diffusion = std::function<double(double x)>;
  using Source = std::function<double(double t, double x)>;

  Transport1D(const Grid& grid, Boundary bc, Velocity vel, bool vel_time_dependent,
              Diffusion diff = nullptr, Source src = nullptr)
      : grid_(grid),
        bc_(bc),
        vel_(std::move(vel)),
        vel_time_dep_(vel_time_dependent),
        diff_(std::move(diff)),
        src_(std::move(src)) {
    if (grid.dim != 1) throw std::invalid_argument("Transport1D: grid must be 1D");
    if (diff_) {
      max_diffusion_ = 0.0;
      for (int i = 0; i <= grid_.x.cells; ++i)
        max_diffusion_ = std::max(max_diffusion_, std::abs(diff_(grid_.x.edge(i))));
    }
  }

  double max_speed(double t) {
    refresh_velocity(t);
    return max_speed_;
  }
  double max_diffusion() const { return max_diffusion_; }

  void operator()(const DensityField& u, double t, std::vector<double>& out) {
    const int n = grid_.x.cells;
    const double dx = grid_.x.dx();
    refresh_velocity(t);
    detail::fill_ghosts(u.v.data(), n, bc_, work_);

    // reconstruction for cells -1..n (work indices 1..n+2)
    polys_.resize(n + 4);
    for (int k = 1; k <= n + 2; ++k)
      polys_[k] = cweno3_reconstruct(work_[k - 1], work_[k], work_[k + 1], dx);

    flux_.assign(n + 1, 0.0);
    if (vel_) {
      for (int i = 0; i <= n; ++i)
        flux_[i] = llf_flux(polys_[i + 1].right(), polys_[i + 2].left(), vface_[i]);
    }
    if (diff_) {
      // h = cell averages of diffusion(x) * u via Gauss-3 on the reconstruction
      h_.resize(n + 4);
      for (int k = 1; k <= n + 2; ++k) {
        const double xl = grid_.x.lo + (k - 2) * dx;
        const CwenoPoly& p = polys_[k];
        h_[k] = gauss3_cell_average(
            [&](double x) { return diff_(x) * p.at((x - xl) / dx - 0.5); }, xl, dx);
      }
      h_[0] = diff_(grid_.x.lo - 1.5 * dx) * work_[0];
      h_[n + 3] = diff_(grid_.x.hi + 1.5 * dx) * work_[n + 3];
      for (int i = 0; i <= n; ++i)
        flux_[i] -= detail::diff_flux4(h_[i], h_[i + 1], h_[i + 2], h_[i + 3], dx);
    }
    if (bc_ == Boundary::ZeroFlux) flux_[0] = flux_[n] = 0.0;

    out.resize(n);
    for (int j = 0; j < n; ++j) out[j] = -(flux_[j + 1] - flux_[j]) / dx;

    if (src_) {
      for (int j = 0; j < n; ++j) {
        const double xl = grid_.x.edge(j);
        const CwenoPoly& p = polys_[j + 2];
        out[j] += gauss3_cell_average(
            [&](double x) { return src_(t, x) * p.at((x - xl) / dx - 0.5); }, xl, dx);
      }
    }
  }

 private:
  void refresh_velocity(double t) {
    if (!vel_) {
      max_speed_ = 0.0;
      vface_.assign(grid_.x.cells + 1, 0.0);
      return;
    }
    if (!vface_.empty() && (!vel_time_dep_ || t == cached_t_)) return;
    const int n = grid_.x.cells;
    vface_.resize(n + 1);
    max_speed_ = 0.0;
    for (int i = 0; i <= n; ++i) {
      vface_[i] = vel_(t, grid_.x.edge(i));
      max_speed_ = std::max(max_speed_, std::abs(vface_[i]));
    }
    cached_t_ = t;
  }

  Grid grid_;
  Boundary bc_;
  Velocity vel_;
  bool vel_time_dep_;
  Diffusion diff_;
  Source src_;
  double max_speed_ = 0.0;
  double max_diffusion_ = 0.0;
  double cached_t_ = -1.0;
  std::vector<double> vface_, work_, h_, flux_;
  std::vector<CwenoPoly> polys_;
};

/// Dimension-by-dimension 2D advection operator with unsplit flux
/// accumulation. The transverse coordinate is evaluated at the cell-center
/// line of each sweep.
class Transport2D {
 public:
  using Velocity = std::function<double(double t, double x, double y)>;

  Transport2D(const Grid& grid, Boundary bc, Velocity vx, Velocity vy,
              bool time_dependent)
      : grid_(grid), bc_(bc), vx_(std::move(vx)), vy_(std::move(vy)),
        time_dep_(time_dependent) {
    if (grid.dim != 2) throw std::invalid_argument("Transport2D: grid must be 2D");
  }

  double max_speed_x(double t) { refresh(t); return max_vx_; }
  double max_speed_y(double t) { refresh(t); return max_vy_; }

  void operator()(const DensityField& u, double t, std::vector<double>& out) {
    const int nx = grid_.x.cells, ny = grid_.y.cells;
    const double dx = grid_.x.dx(), dy = grid_.y.dx();
    refresh(t);
    out.assign(static_cast<std::size_t>(nx) * ny, 0.0);

    std::vector<double> line, flux;
    std::vector<CwenoPoly> polys;

    line.resize(nx);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) line[i] = u.at(i, j);
      detail::fill_ghosts(line.data(), nx, bc_, work_);
      polys.resize(nx + 4);
      for (int k = 1; k <= nx + 2; ++k)
        polys[k] = cweno3_reconstruct(work_[k - 1], work_[k], work_[k + 1], dx);
      flux.assign(nx + 1, 0.0);
      for (int i = 0; i <= nx; ++i)
        flux[i] = llf_flux(polys[i + 1].right(), polys[i + 2].left(),
                           vx_face_[static_cast<std::size_t>(j) * (nx + 1) + i]);
      if (bc_ == Boundary::ZeroFlux) flux[0] = flux[nx] = 0.0;
      for (int i = 0; i < nx; ++i)
        out[static_cast<std::size_t>(j) * nx + i] -= (flux[i + 1] - flux[i]) / dx;
    }

    line.resize(ny);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) line[j] = u.at(i, j);
      detail::fill_ghosts(line.data(), ny, bc_, work_);
      polys.resize(ny + 4);
      for (int k = 1; k <= ny + 2; ++k)
        polys[k] = cweno3_reconstruct(work_[k - 1], work_[k], work_[k + 1], dy);
      flux.assign(ny + 1, 0.0);
      for (int j = 0; j <= ny; ++j)
        flux[j] = llf_flux(polys[j + 1].right(), polys[j + 2].left(),
                           vy_face_[static_cast<std::size_t>(i) * (ny + 1) + j]);
      if (bc_ == Boundary::ZeroFlux) flux[0] = flux[ny] = 0.0;
      for (int j = 0; j < ny; ++j)
        out[static_cast<std::size_t>(j) * nx + i] -= (flux[j + 1] - flux[j]) / dy;
    }
  }

 private:
  void refresh(double t) {
    if (!vx_face_.empty() && (!time_dep_ || t == cached_t_)) return;
    const int nx = grid_.x.cells, ny = grid_.y.cells;
    vx_face_.resize(static_cast<std::size_t>(ny) * (nx + 1));
    vy_face_.resize(static_cast<std::size_t>(nx) * (ny + 1));
    max_vx_ = max_vy_ = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const double v = vx_(t, grid_.x.edge(i), grid_.y.center(j));
        vx_face_[static_cast<std::size_t>(j) * (nx + 1) + i] = v;
        max_vx_ = std::max(max_vx_, std::abs(v));
      }
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j <= ny; ++j) {
        const double v = vy_(t, grid_.x.center(i), grid_.y.edge(j));
        vy_face_[static_cast<std::size_t>(i) * (ny + 1) + j] = v;
        max_vy_ = std::max(max_vy_, std::abs(v));
      }
    cached_t_ = t;
  }

  Grid grid_;
  Boundary bc_;
  Velocity vx_, vy_;
  bool time_dep_;
  double max_vx_ = 0.0, max_vy_ = 0.0;
  double cached_t_ = -1.0;
  std::vector<double> vx_face_, vy_face_, work_;
};

}  // namespace kinn
