#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kinn/activation.hpp"
#include "kinn/grid.hpp"
#include "kinn/network.hpp"
#include "kinn/time_stepping.hpp"
#include "kinn/transport.hpp"

namespace kinn {

/// Vlasov transport of the data density:
///   d/dt g + div( sigma(w(t) x + b(t)) g ) = 0.
struct MeanFieldProblem {
  Grid grid;
  DensityField initial;  // mass 1 +- 1e-10
  NetworkParams params;
  ActivationFn activation;
  double final_time = 1.0;
  Boundary bc = Boundary::Outflow;
};

struct SolveOptions {
  double cfl = 0.45;
  bool record_moments = false;  // per-step m0..m2 and variance (1D only)
  double min_dt = 1e-14;
};

struct MomentRow {
  double t, m0, m1, m2, variance;
};

struct SolveReport {
  std::vector<double> snapshot_times;
  std::vector<DensityField> snapshots;
  std::vector<MomentRow> moment_series;
  long steps = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double max_mass_drift = 0.0;  // max |mass(t) - mass(0)| over steps
  double min_density = 0.0;     // most negative excursion seen
};

namespace detail {

inline void validate_problem(const MeanFieldProblem& p) {
  p.grid.validate();
  if (!(p.final_time > 0.0))
    throw std::invalid_argument("meanfield: final_time must be positive");
  if (std::abs(p.initial.mass() - 1.0) > 1e-10)
    throw std::invalid_argument("meanfield: initial density must have unit mass");
  if (p.params.dim != p.grid.dim)
    throw std::invalid_argument("meanfield: params/grid dimension mismatch");
}

inline std::vector<double> checked_snapshots(std::vector<double> times, double T) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > T + 1e-12)
      throw std::invalid_argument("snapshot time outside [0, final_time]");
    if (i > 0 && times[i] < times[i - 1])
      throw std::invalid_argument("snapshot times must be sorted");
  }
  return times;
}

inline std::vector<double> param_breakpoints(const NetworkParams& p, double T) {
  std::vector<double> ev;
  for (const auto& e : p.table)
    if (e.t > 0.0 && e.t < T) ev.push_back(e.t);
  return ev;
}

template <class Stepper, class DtFn>
SolveReport march(DensityField field, double T, std::vector<double> snaps,
                  const SolveOptions& opt, Stepper&& step, DtFn&& pick_dt,
                  const std::vector<double>& events = {}) {
  SolveReport rep;
  rep.mass_initial = field.mass();
  rep.min_density = field.min_value();
  double t = 0.0;
  std::size_t next_snap = 0;
  auto record = [&](double tt, const DensityField& f) {
    while (next_snap < snaps.size() && snaps[next_snap] <= tt + 1e-12) {
      rep.snapshot_times.push_back(snaps[next_snap]);
      rep.snapshots.push_back(f);
      ++next_snap;
    }
  };
  auto moments = [&](double tt, const DensityField& f) {
    if (!opt.record_moments || f.grid.dim != 1) return;
    const double m0 = field_moment(f, 0), m1 = field_moment(f, 1),
                 m2 = field_moment(f, 2);
    rep.moment_series.push_back({tt, m0, m1, m2, m2 - m1 * m1});
  };
  record(t, field);
  moments(t, field);
  const double tiny = 1e-12 * std::max(1.0, T);
  std::size_t next_event = 0;
  while (t < T - tiny) {
    double dt = pick_dt(field, t);
    if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - t);
    while (next_event < events.size() && events[next_event] <= t + tiny) ++next_event;
    if (next_event < events.size()) dt = std::min(dt, events[next_event] - t);
    dt = std::min(dt, T - t);
    if (!(dt > opt.min_dt))
      throw std::runtime_error("meanfield: time step underflow (CFL failure)");
    field = step(field, t, dt);
    t += dt;
    ++rep.steps;
    if (!field.finite())
      throw std::runtime_error("meanfield: non-finite field at t=" + std::to_string(t));
    rep.max_mass_drift =
        std::max(rep.max_mass_drift, std::abs(field.mass() - rep.mass_initial));
    rep.min_density = std::min(rep.min_density, field.min_value());
    moments(t, field);
    record(t, field);
  }
  rep.mass_final = field.mass();
  if (next_snap < snaps.size()) {  // snapshots exactly at T
    rep.snapshot_times.push_back(T);
    rep.snapshots.push_back(field);
  }
  return rep;
}

}  // namespace detail

inline SolveReport solve_meanfield(const MeanFieldProblem& prob,
                                   std::vector<double> snapshot_times,
                                   const SolveOptions& opt = {}) {
  detail::validate_problem(prob);
  auto snaps = detail::checked_snapshots(std::move(snapshot_times), prob.final_time);
  const ActivationFn act = prob.activation;
  const NetworkParams params = prob.params;
  const bool tdep = !params.constant();

  if (prob.grid.dim == 1) {
    Transport1D op(
        prob.grid, prob.bc,
        [act, params](double t, double x) {
          return act.value(params.w1(t) * x + params.b1(t));
        },
        tdep);
    return detail::march(
        prob.initial, prob.final_time, snaps, opt,
        [&](const DensityField& f, double t, double dt) {
          return ssprk3_step(f, t, dt, op);
        },
        [&](const DensityField& f, double t) {
          const double s = op.max_speed(t);
          if (s <= 0.0) return prob.final_time - t;  // frozen dynamics
          return adaptive_dt(f, s, 0.0, opt.cfl);
        },
        detail::param_breakpoints(params, prob.final_time));
  }

  Transport2D op(
      prob.grid, prob.bc,
      [act, params](double t, double x, double y) {
        const auto& w = params.w2(t);
        const auto& b = params.b2(t);
        return act.value(w[0] * x + w[1] * y + b[0]);
      },
      [act, params](double t, double x, double y) {
        const auto& w = params.w2(t);
        const auto& b = params.b2(t);
        return act.value(w[2] * x + w[3] * y + b[1]);
      },
      tdep);
  return detail::march(
      prob.initial, prob.final_time, snaps, opt,
      [&](const DensityField& f, double t, double dt) {
        return ssprk3_step(f, t, dt, op);
      },
      [&](const DensityField& f, double t) {
        const double rx = op.max_speed_x(t) / f.grid.x.dx();
        const double ry = op.max_speed_y(t) / f.grid.y.dx();
        if (rx + ry <= 0.0) return prob.final_time - t;  // frozen dynamics
        return opt.cfl / (rx + ry);
      },
      detail::param_breakpoints(params, prob.final_time));
}

/// Dirac-delta steady-state locations: solutions of w y + b = z for z ranging
/// over activation zeros, restricted to the grid box. Requires w of maximum
/// rank. 2D tuples enumerate zeros componentwise.
inline std::vector<std::array<double, 2>> delta_steady_states(
    const ActivationFn& act, const std::array<double, 4>& w,
    const std::array<double, 2>& b, const Grid& domain) {
  std::vector<std::array<double, 2>> out;
  if (domain.dim == 1) {
    const double ww = w[0];
    if (std::abs(ww) < 1e-14)
      throw std::invalid_argument("delta_steady_states: rank-deficient weight");
    const double a0 = ww * domain.x.lo + b[0], a1 = ww * domain.x.hi + b[0];
    const ZeroSet zs = act.zeros(std::min(a0, a1), std::max(a0, a1));
    for (double z : zs.points) {
      const double y = (z - b[0]) / ww;
      if (y >= domain.x.lo && y <= domain.x.hi) out.push_back({y, 0.0});
    }
  } else {
    const double det = w[0] * w[3] - w[1] * w[2];
    if (std::abs(det) < 1e-14)
      throw std::invalid_argument("delta_steady_states: rank-deficient weight");
    auto arg_range = [&](int row) {
      const double c[4] = {
          w[2 * row] * domain.x.lo + w[2 * row + 1] * domain.y.lo + b[row],
          w[2 * row] * domain.x.lo + w[2 * row + 1] * domain.y.hi + b[row],
          w[2 * row] * domain.x.hi + w[2 * row + 1] * domain.y.lo + b[row],
          w[2 * row] * domain.x.hi + w[2 * row + 1] * domain.y.hi + b[row]};
      return std::pair(std::min({c[0], c[1], c[2], c[3]}),
                       std::max({c[0], c[1], c[2], c[3]}));
    };
    const auto [l0, h0] = arg_range(0);
    const auto [l1, h1] = arg_range(1);
    const ZeroSet z0 = act.zeros(l0, h0);
    const ZeroSet z1 = act.zeros(l1, h1);
    for (double za : z0.points)
      for (double zb : z1.points) {
        const double rx = za - b[0], ry = zb - b[1];
        const double yx = (w[3] * rx - w[1] * ry) / det;
        const double yy = (-w[2] * rx + w[0] * ry) / det;
        if (yx >= domain.x.lo && yx <= domain.x.hi && yy >= domain.y.lo &&
            yy <= domain.y.hi)
          out.push_back({yx, yy});
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> delta_steady_states_1d(const ActivationFn& act, double w,
                                                  double b, const Grid& domain) {
  std::vector<double> ys;
  for (const auto& p : delta_steady_states(act, {w, 0, 0, 0}, {b, 0}, domain))
    ys.push_back(p[0]);
  return ys;
}

}  // namespace kinn
