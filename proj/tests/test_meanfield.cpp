#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "kinn/initial.hpp"
#include "kinn/meanfield.hpp"
#include "kinn/moments.hpp"
#include "kinn/particles.hpp"
#include "kinn/rng.hpp"
#include "kinn/wasserstein.hpp"

using namespace kinn;

TEST_CASE("zero velocity keeps the density constant", "[meanfield]") {
  MeanFieldProblem prob;
  prob.grid = Grid::make1d(-3, 3, 64);
  prob.initial = gaussian_field(prob.grid, Boundary::Outflow, 0.0, 0.5);
  prob.params = NetworkParams::constant1d(0.0, 0.0);
  prob.activation = ActivationFn(Activation::Identity);
  prob.final_time = 1.0;
  // no advection and no diffusion: the CFL picker has nothing to bound
  CHECK_THROWS(solve_meanfield(prob, {1.0}));

  // with a tanh activation and b != 0 the velocity is a nonzero constant,
  // so a pure translation is a valid smoke test of snapshot plumbing
  prob.params = NetworkParams::constant1d(0.0, 0.5);
  prob.activation = ActivationFn(Activation::Identity);
  const auto rep = solve_meanfield(prob, {0.0, 1.0});
  REQUIRE(rep.snapshots.size() == 2);
  CHECK(field_moment(rep.snapshots[1], 1) ==
        Catch::Approx(field_moment(rep.snapshots[0], 1) + 0.5).margin(2e-3));
}

TEST_CASE("field moments of a discretized gaussian", "[meanfield]") {
  Grid g = Grid::make1d(-6, 6, 400);
  const auto f = gaussian_field(g, Boundary::Outflow, 1.0, 1.0);
  CHECK(field_moment(f, 0) == Catch::Approx(1.0).margin(1e-10));
  CHECK(field_moment(f, 2) == Catch::Approx(2.0).margin(1e-3));

  const auto sym = gaussian_field(g, Boundary::Outflow, 0.0, 1.0);
  CHECK(field_moment(sym, 1) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("solver moments track the closed solutions", "[meanfield]") {
  MeanFieldProblem prob;
  prob.grid = Grid::make1d(-6, 6, 400);
  prob.initial = gaussian_field(prob.grid, Boundary::ZeroFlux, 1.0, 1.0);
  prob.params = NetworkParams::constant1d(-1.0, 0.0);
  prob.activation = ActivationFn(Activation::Identity);
  prob.final_time = 1.0;
  prob.bc = Boundary::ZeroFlux;
  const auto rep = solve_meanfield(prob, {0.25, 0.5, 0.75, 1.0});
  REQUIRE(rep.snapshots.size() == 4);
  for (std::size_t s = 0; s < rep.snapshots.size(); ++s) {
    const double t = rep.snapshot_times[s];
    CHECK(field_moment(rep.snapshots[s], 1) ==
          Catch::Approx(std::exp(-t)).margin(1e-2));
    CHECK(field_moment(rep.snapshots[s], 2) ==
          Catch::Approx(2.0 * std::exp(-2.0 * t)).margin(1e-2));
  }
  CHECK(rep.max_mass_drift < 1e-10);
}

TEST_CASE("variance decreases monotonically for contracting dynamics",
          "[meanfield]") {
  MeanFieldProblem prob;
  prob.grid = Grid::make1d(-6, 6, 200);
  prob.initial = gaussian_field(prob.grid, Boundary::ZeroFlux, 0.5, 0.8);
  prob.params = NetworkParams::constant1d(-0.8, 0.0);
  prob.activation = ActivationFn(Activation::Identity);
  prob.final_time = 1.5;
  prob.bc = Boundary::ZeroFlux;
  SolveOptions opt;
  opt.record_moments = true;
  const auto rep = solve_meanfield(prob, {1.5}, opt);
  REQUIRE(rep.moment_series.size() > 10);
  for (std::size_t i = 1; i < rep.moment_series.size(); ++i)
    REQUIRE(rep.moment_series[i].variance < rep.moment_series[i - 1].variance);
}

TEST_CASE("classification run splits mass to the walls", "[meanfield][slow]") {
  MeanFieldProblem prob;
  prob.grid = Grid::make1d(2, 8, 400);
  prob.initial = uniform_field(prob.grid, Boundary::ZeroFlux, 2.0, 8.0);
  prob.params = NetworkParams::constant1d(1.0, -5.0);
  prob.activation = ActivationFn(Activation::Tanh);
  prob.final_time = 12.0;
  prob.bc = Boundary::ZeroFlux;
  const auto rep = solve_meanfield(prob, {12.0});
  const auto& f = rep.snapshots.back();
  // characteristics split at the repelling zero x=5: half the mass each side
  CHECK(mass_in_window(f, 2.0, 5.0) == Catch::Approx(0.5).margin(1e-2));
  CHECK(mass_in_window(f, 5.0, 8.0) == Catch::Approx(0.5).margin(1e-2));
  // and concentrates near the walls
  CHECK(mass_in_window(f, 2.0, 2.0 + f.grid.x.dx()) > 0.48);
  CHECK(mass_in_window(f, 8.0 - f.grid.x.dx(), 8.0) > 0.48);
  CHECK(rep.max_mass_drift < 1e-10);
}

TEST_CASE("delta steady state locations", "[meanfield]") {
  Grid g1 = Grid::make1d(0, 10, 100);
  const auto tanh_loc =
      delta_steady_states_1d(ActivationFn(Activation::Tanh), 1.0, -5.0, g1);
  REQUIRE(tanh_loc.size() == 1);
  CHECK(tanh_loc[0] == Catch::Approx(5.0));

  Grid g2 = Grid::make1d(-2, 2, 64);
  const auto gcu_loc =
      delta_steady_states_1d(ActivationFn(Activation::GCU), 1.0, 0.0, g2);
  REQUIRE(gcu_loc.size() == 3);
  CHECK(gcu_loc[0] == Catch::Approx(-std::numbers::pi / 2));
  CHECK(gcu_loc[1] == 0.0);
  CHECK(gcu_loc[2] == Catch::Approx(std::numbers::pi / 2));

  Grid g2d = Grid::make2d({-2, 2, 32}, {-2, 2, 32});
  const auto reg = delta_steady_states(ActivationFn(Activation::Identity),
                                       {-1, 0, 0, -1}, {1, 0}, g2d);
  REQUIRE(reg.size() == 1);
  CHECK(reg[0][0] == Catch::Approx(1.0));
  CHECK(reg[0][1] == Catch::Approx(0.0).margin(1e-14));

  CHECK_THROWS(delta_steady_states(ActivationFn(Activation::Identity),
                                   {1, 1, 1, 1}, {0, 0}, g2d));
}

TEST_CASE("delta locations invariant under rescaling for single-zero activations",
          "[meanfield]") {
  Grid g = Grid::make1d(-10, 10, 64);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = rng::uniform(41, trial, 0, 0.2, 2.0) *
                     (trial % 2 ? 1.0 : -1.0);
    const double b = rng::uniform(42, trial, 1, -3, 3);
    for (const auto& act :
         {ActivationFn(Activation::Identity), ActivationFn(Activation::Tanh)}) {
      const auto base = delta_steady_states_1d(act, w, b, g);
      const auto scaled = delta_steady_states_1d(act, 3.7 * w, 3.7 * b, g);
      REQUIRE(base.size() == scaled.size());
      for (std::size_t i = 0; i < base.size(); ++i)
        REQUIRE(base[i] == Catch::Approx(scaled[i]).margin(1e-12));
    }
  }
}

TEST_CASE("empirical measure converges to the mean-field density",
          "[meanfield][slow]") {
  // Dobrushin-style check: W1(empirical at T=1, PDE at T=1) decreases with M
  MeanFieldProblem prob;
  prob.grid = Grid::make1d(-6, 6, 400);
  prob.initial = gaussian_field(prob.grid, Boundary::ZeroFlux, 1.0, 1.0);
  prob.params = NetworkParams::constant1d(-1.0, 0.0);
  prob.activation = ActivationFn(Activation::Identity);
  prob.final_time = 1.0;
  prob.bc = Boundary::ZeroFlux;
  const auto pde = solve_meanfield(prob, {1.0}).snapshots.back();

  std::vector<double> avg;
  for (std::size_t m : {100, 1000, 10000}) {
    double acc = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto e = ParticleEnsemble::sample_gaussian(m, 1.0, 1.0, 1000 + seed);
      const auto traj = integrate_ode(e, prob.params, prob.activation, 1.0, 1e-3,
                                      {.snapshot_every = 100000});
      std::vector<double> xs(traj.back().states);
      acc += wasserstein1_1d(xs, pde);
    }
    avg.push_back(acc / 10.0);
  }
  CHECK(avg[1] < avg[0]);
  CHECK(avg[2] < avg[1]);
}

TEST_CASE("2d mean field contracts to the regression target", "[meanfield][slow]") {
  MeanFieldProblem prob;
  prob.grid = Grid::make2d({-1, 3, 64}, {-2, 2, 64});
  prob.initial = discretize_pdf2d(prob.grid, Boundary::ZeroFlux, [](double x, double y) {
    return gaussian_pdf(x, 1.5, 0.1) * gaussian_pdf(y, 0.5, 0.1);
  });
  prob.params = NetworkParams::constant2d({-1, 0, 0, -1}, {1, 0});
  prob.activation = ActivationFn(Activation::Identity);
  prob.final_time = 2.0;
  prob.bc = Boundary::ZeroFlux;
  const auto rep = solve_meanfield(prob, {0.0, 2.0});
  const double m2_0 = second_moment_about(rep.snapshots[0], 1.0, 0.0);
  const double m2_T = second_moment_about(rep.snapshots[1], 1.0, 0.0);
  CHECK(m2_T < 0.1 * m2_0);
  CHECK(rep.max_mass_drift < 1e-10);
}
