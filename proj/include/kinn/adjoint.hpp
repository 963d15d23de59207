#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kinn/activation.hpp"
#include "kinn/grid.hpp"
#include "kinn/meanfield.hpp"
#include "kinn/network.hpp"
#include "kinn/time_stepping.hpp"
#include "kinn/transport.hpp"

namespace kinn {

/// L2 loss  D = 1/2 int |g(T) - h|^2 dx  by the midpoint rule.
inline double loss(const DensityField& gT, const DensityField& h) {
  if (!(gT.grid == h.grid)) throw std::invalid_argument("loss: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < gT.v.size(); ++i) {
    const double d = gT.v[i] - h.v[i];
    s += d * d;
  }
  return 0.5 * s * gT.grid.cell_volume();
}

/// Forward solve with dense (every step) storage, for pairing with the
/// backward multiplier on the same time mesh.
struct ForwardTrajectory {
  std::vector<double> times;
  std::vector<DensityField> fields;
};

inline ForwardTrajectory forward_dense(const MeanFieldProblem& prob,
                                       double cfl = 0.45) {
  detail::validate_problem(prob);
  if (prob.grid.dim != 1)
    throw std::invalid_argument("forward_dense: 1D problems only");
  const ActivationFn act = prob.activation;
  const NetworkParams params = prob.params;
  Transport1D op(
      prob.grid, prob.bc,
      [act, params](double t, double x) {
        return act.value(params.w1(t) * x + params.b1(t));
      },
      !params.constant());
  ForwardTrajectory traj;
  DensityField f = prob.initial;
  double t = 0.0;
  traj.times.push_back(t);
  traj.fields.push_back(f);
  const double T = prob.final_time;
  while (t < T - 1e-12 * std::max(1.0, T)) {
    const double s = op.max_speed(t);
    const double dt =
        s > 0.0 ? std::min(adaptive_dt(f, s, 0.0, cfl), T - t) : T - t;
    if (!(dt > 1e-14)) throw std::runtime_error("forward_dense: dt underflow");
    f = ssprk3_step(f, t, dt, op);
    t += dt;
    if (!f.finite())
      throw std::runtime_error("forward_dense: non-finite field at t=" +
                               std::to_string(t));
    traj.times.push_back(t);
    traj.fields.push_back(f);
  }
  return traj;
}

/// Lagrange multiplier of the terminal-loss optimality system: transport
///   d/dt lambda + sigma(w x + b) d/dx lambda = 0,  lambda(T) = g(T) - h,
/// solved backward on the forward time mesh. In reversed time s = T - t the
/// equation becomes a balance law,
///   d/ds mu + d/dx( (-sigma) mu ) = -(d/dx sigma) mu,
/// handled by the same CWENO/LLF machinery plus a quadrature source.
struct AdjointState {
  std::vector<double> times;           // same mesh as the forward trajectory
  std::vector<DensityField> lambda;    // lambda[i] at times[i]
  std::vector<double> terminal_residual;
};

inline AdjointState solve_adjoint_backward(const ForwardTrajectory& traj,
                                           const DensityField& h,
                                           const NetworkParams& params,
                                           const ActivationFn& act,
                                           const Grid& grid) {
  if (traj.fields.empty()) throw std::invalid_argument("adjoint: empty trajectory");
  const DensityField& gT = traj.fields.back();
  if (!(gT.grid == h.grid)) throw std::invalid_argument("adjoint: grid mismatch");
  const double w = params.w1(0.0), b = params.b1(0.0);

  Transport1D op(
      grid, Boundary::Outflow,
      [act, w, b](double, double x) { return -act.value(w * x + b); }, false,
      nullptr,
      [act, w, b](double, double x) { return -w * act.derivative(w * x + b); });

  AdjointState adj;
  adj.times = traj.times;
  adj.lambda.resize(traj.times.size());

  DensityField mu(grid, Boundary::Outflow);
  adj.terminal_residual.resize(gT.v.size());
  for (std::size_t i = 0; i < gT.v.size(); ++i) {
    mu.v[i] = gT.v[i] - h.v[i];
    adj.terminal_residual[i] = mu.v[i];
  }

  const std::size_t n = traj.times.size();
  adj.lambda[n - 1] = mu;
  const double T = traj.times.back();
  for (std::size_t k = n - 1; k > 0; --k) {
    const double dt = traj.times[k] - traj.times[k - 1];
    mu = ssprk3_step(mu, T - traj.times[k], dt, op);
    if (!mu.finite())
      throw std::runtime_error("adjoint: non-finite multiplier");
    adj.lambda[k - 1] = mu;
  }
  return adj;
}

namespace detail {

// fourth-order first derivative of a cell array, one-sided at the edges
inline std::vector<double> ddx4(const std::vector<double>& u, double dx) {
  const int n = static_cast<int>(u.size());
  std::vector<double> d(n);
  auto at = [&](int i) { return u[i]; };
  for (int i = 2; i + 2 < n; ++i)
    d[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * dx);
  if (n >= 5) {
    d[0] = (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) / (12 * dx);
    d[1] = (-3 * at(0) - 10 * at(1) + 18 * at(2) - 6 * at(3) + at(4)) / (12 * dx);
    d[n - 1] =
        (25 * at(n - 1) - 48 * at(n - 2) + 36 * at(n - 3) - 16 * at(n - 4) + 3 * at(n - 5)) /
        (12 * dx);
    d[n - 2] =
        (3 * at(n - 1) + 10 * at(n - 2) - 18 * at(n - 3) + 6 * at(n - 4) - at(n - 5)) /
        (12 * dx);
  }
  return d;
}

}  // namespace detail

/// Space-time sensitivities of the loss:
///   dD/dw = int_0^T int g x sigma'(w x + b) d/dx lambda dx dt,
///   dD/db = int_0^T int g   sigma'(w x + b) d/dx lambda dx dt,
/// trapezoidal in time on the stored mesh, midpoint in space.
inline std::pair<double, double> gradients(const ForwardTrajectory& traj,
                                           const AdjointState& adj,
                                           const ActivationFn& act,
                                           const NetworkParams& params,
                                           const Grid& grid) {
  if (traj.times.size() != adj.times.size())
    throw std::invalid_argument("gradients: time meshes differ");
  const double w = params.w1(0.0), b = params.b1(0.0);
  const double dx = grid.x.dx();
  const int n = grid.x.cells;
  const std::size_t nt = traj.times.size();

  std::vector<double> sw(nt, 0.0), sb(nt, 0.0);
  for (std::size_t k = 0; k < nt; ++k) {
    const auto dl = detail::ddx4(adj.lambda[k].v, dx);
    double aw = 0.0, ab = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = grid.x.center(j);
      const double gsp = traj.fields[k].at(j) * act.derivative(w * x + b) * dl[j];
      aw += gsp * x;
      ab += gsp;
    }
    sw[k] = aw * dx;
    sb[k] = ab * dx;
  }
  double gw = 0.0, gb = 0.0;
  for (std::size_t k = 0; k + 1 < nt; ++k) {
    const double half = 0.5 * (traj.times[k + 1] - traj.times[k]);
    gw += half * (sw[k] + sw[k + 1]);
    gb += half * (sb[k] + sb[k + 1]);
  }
  return {gw, gb};
}

// ---------------------------------------------------------------------------
// Forward re-training: gradient steps on constant (w, b), each iteration a
// fresh forward/backward solve.
// ---------------------------------------------------------------------------

struct RetrainConfig {
  double gamma = 2.0;
  double tol = 1e-3;
  int max_iterations = 50;
  double horizon = 5.0;
  double cfl = 0.45;
};

struct RetrainRow {
  int k;
  double w, b;
  double loss;
  double step_norm;  // |w_{k+1} - w_k| + |b_{k+1} - b_k|
};

struct RetrainResult {
  double w = 0.0, b = 0.0;
  std::vector<RetrainRow> log;
  bool converged = false;
  bool aborted_divergence = false;
};

inline RetrainResult retrain(double w0, double b0, const DensityField& g0,
                             const DensityField& h, const ActivationFn& act,
                             Boundary bc, const RetrainConfig& cfg) {
  if (cfg.gamma < 0.0 || !(cfg.tol > 0.0) || cfg.max_iterations <= 0 ||
      !(cfg.horizon > 0.0))
    throw std::invalid_argument("retrain: invalid configuration");
  RetrainResult res;
  res.w = w0;
  res.b = b0;
  int rising = 0;
  double prev_loss = 0.0;
  for (int k = 0; k < cfg.max_iterations; ++k) {
    MeanFieldProblem prob;
    prob.grid = g0.grid;
    prob.initial = g0;
    prob.params = NetworkParams::constant1d(res.w, res.b);
    prob.activation = act;
    prob.final_time = cfg.horizon;
    prob.bc = bc;
    const auto traj = forward_dense(prob, cfg.cfl);
    const double D = loss(traj.fields.back(), h);
    const auto adj = solve_adjoint_backward(traj, h, prob.params, act, g0.grid);
    const auto [gw, gb] = gradients(traj, adj, act, prob.params, g0.grid);

    const double step = cfg.gamma * (std::abs(gw) + std::abs(gb));
    res.log.push_back({k, res.w, res.b, D, step});

    if (k > 0 && D > prev_loss) {
      if (++rising >= 5) {
        res.aborted_divergence = true;
        return res;
      }
    } else {
      rising = 0;
    }
    prev_loss = D;

    res.w -= cfg.gamma * gw;
    res.b -= cfg.gamma * gb;
    if (cfg.gamma > 0.0 && step < cfg.tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace kinn
