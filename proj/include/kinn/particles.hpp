#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinn/activation.hpp"
#include "kinn/grid.hpp"
#include "kinn/network.hpp"
#include "kinn/rng.hpp"

namespace kinn {

/// M particle states in d dimensions (d = 1 or 2), coordinate-interleaved.
struct ParticleEnsemble {
  int dim = 1;
  double time = 0.0;
  std::vector<double> states;  // size M*dim

  std::size_t size() const { return states.size() / dim; }
  double& x(std::size_t i) { return states[i * dim]; }
  double x(std::size_t i) const { return states[i * dim]; }
  double& y(std::size_t i) { return states[i * dim + 1]; }
  double y(std::size_t i) const { return states[i * dim + 1]; }

  static ParticleEnsemble from1d(std::vector<double> xs, double t = 0.0) {
    ParticleEnsemble e;
    e.dim = 1;
    e.states = std::move(xs);
    e.time = t;
    if (e.states.empty()) throw std::invalid_argument("ensemble: M must be >= 1");
    return e;
  }

  /// i.i.d. Gaussian sample, one RNG stream per particle.
  static ParticleEnsemble sample_gaussian(std::size_t m, double mean, double sd,
                                          std::uint64_t seed) {
    std::vector<double> xs(m);
    for (std::size_t i = 0; i < m; ++i)
      xs[i] = mean + sd * rng::normal01(seed, i, 0);
    return from1d(std::move(xs));
  }

  static ParticleEnsemble sample_uniform(std::size_t m, double lo, double hi,
                                         std::uint64_t seed) {
    std::vector<double> xs(m);
    for (std::size_t i = 0; i < m; ++i) xs[i] = rng::uniform(seed, i, 0, lo, hi);
    return from1d(std::move(xs));
  }
};

namespace detail {

inline void check_finite(const ParticleEnsemble& e, const char* op) {
  for (std::size_t i = 0; i < e.states.size(); ++i)
    if (!std::isfinite(e.states[i]))
      throw std::overflow_error(std::string(op) + ": non-finite state at particle " +
                                std::to_string(i / e.dim));
}

}  // namespace detail

/// One explicit-Euler layer: x <- x + dt * sigma(w x + b), componentwise sigma.
inline ParticleEnsemble step_resnet(const ParticleEnsemble& e, const NetworkParams& p,
                                    const ActivationFn& act, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_resnet: dt must be positive");
  ParticleEnsemble out = e;
  if (e.dim == 1) {
    const double w = p.w1(e.time), b = p.b1(e.time);
    for (std::size_t i = 0; i < out.size(); ++i)
      out.x(i) += dt * act.value(w * out.x(i) + b);
  } else {
    const auto& w = p.w2(e.time);
    const auto& b = p.b2(e.time);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double xi = out.x(i), yi = out.y(i);
      out.x(i) = xi + dt * act.value(w[0] * xi + w[1] * yi + b[0]);
      out.y(i) = yi + dt * act.value(w[2] * xi + w[3] * yi + b[1]);
    }
  }
  out.time = e.time + dt;
  detail::check_finite(out, "step_resnet");
  return out;
}

struct OdeOptions {
  std::size_t snapshot_every = 1;  // record every k-th step (last always kept)
  std::optional<std::pair<double, double>> reflect;  // reflecting clamp bounds
};

/// Explicit-Euler integration of dx/dt = sigma(w(t) x + b(t)) over [0, T],
/// ceil(T/dt) steps. Returns the recorded trajectory, final state last.
inline std::vector<ParticleEnsemble> integrate_ode(const ParticleEnsemble& e0,
                                                   const NetworkParams& p,
                                                   const ActivationFn& act, double T,
                                                   double dt,
                                                   const OdeOptions& opt = {}) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("integrate_ode: T and dt must be positive");
  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt));
  std::vector<ParticleEnsemble> traj;
  traj.push_back(e0);
  ParticleEnsemble cur = e0;
  for (std::size_t s = 1; s <= steps; ++s) {
    cur = step_resnet(cur, p, act, dt);
    if (opt.reflect) {
      const auto [lo, hi] = *opt.reflect;
      for (double& v : cur.states) {
        if (v < lo) v = 2.0 * lo - v;
        if (v > hi) v = 2.0 * hi - v;
      }
    }
    if (s % opt.snapshot_every == 0 || s == steps) traj.push_back(cur);
  }
  return traj;
}

/// One stochastic interaction x* = x + eps sigma(w x + b) + sqrt(eps) K(x) eta
/// applied to every particle; eta ~ N(0, nu^2) drawn from the (seed, particle,
/// round) counter stream, so the result is reproducible for a fixed seed.
template <class DiffusionK>
ParticleEnsemble step_stochastic(const ParticleEnsemble& e, const NetworkParams& p,
                                 const ActivationFn& act, double eps, double nu,
                                 DiffusionK&& K, std::uint64_t seed,
                                 std::uint64_t round = 0) {
  if (!(eps > 0.0)) throw std::invalid_argument("step_stochastic: eps must be positive");
  if (e.dim != 1) throw std::invalid_argument("step_stochastic: 1D only");
  ParticleEnsemble out = e;
  const double w = p.w1(e.time), b = p.b1(e.time);
  const double seps = std::sqrt(eps);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double eta = nu == 0.0 ? 0.0 : nu * rng::normal01(seed, i, round);
    out.x(i) += eps * act.value(w * out.x(i) + b) + seps * K(out.x(i)) * eta;
  }
  out.time = e.time + eps;
  detail::check_finite(out, "step_stochastic");
  return out;
}

/// Normalized histogram of the ensemble: cell value = count / (M * cell
/// volume). Cells are half-open with the top edge folded into the last cell.
inline DensityField empirical_density(const ParticleEnsemble& e, const Grid& grid) {
  if (grid.dim != e.dim)
    throw std::invalid_argument("empirical_density: grid/ensemble dimension mismatch");
  DensityField f(grid, Boundary::Outflow);
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (grid.dim == 1) {
      const int c = grid.x.locate(e.x(i));
      if (c < 0) { outside.push_back(i); continue; }
      f.at(c) += 1.0;
    } else {
      const int cx = grid.x.locate(e.x(i));
      const int cy = grid.y.locate(e.y(i));
      if (cx < 0 || cy < 0) { outside.push_back(i); continue; }
      f.at(cx, cy) += 1.0;
    }
  }
  if (!outside.empty()) {
    std::string msg = "empirical_density: particles outside grid:";
    for (std::size_t k = 0; k < std::min<std::size_t>(outside.size(), 16); ++k)
      msg += " " + std::to_string(outside[k]);
    if (outside.size() > 16) msg += " ... (" + std::to_string(outside.size()) + " total)";
    throw std::invalid_argument(msg);
  }
  const double scale = 1.0 / (static_cast<double>(e.size()) * grid.cell_volume());
  for (double& v : f.v) v *= scale;
  return f;
}

}  // namespace kinn
