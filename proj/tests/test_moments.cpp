#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "kinn/moments.hpp"
#include "kinn/rng.hpp"

using namespace kinn;

namespace {
const std::vector<double> kGaussianN11{1.0, 1.0, 2.0, 4.0, 10.0};  // N(1,1) moments
}

TEST_CASE("moment ode rhs arithmetic", "[moments]") {
  CHECK(moment_ode_rhs(1, -1.0, 0.0, 1.0, 1.0) == Catch::Approx(-1.0));
  CHECK(moment_ode_rhs(2, -1.0, 0.0, 2.0, 1.0) == Catch::Approx(-4.0));
  CHECK(moment_ode_rhs(1, -1.0, 0.5, 1.0, 1.0) == Catch::Approx(-0.5));
}

TEST_CASE("closed solution with zero bias", "[moments]") {
  const auto p = NetworkParams::constant1d(-1.0, 0.0);
  CHECK(moment_closed_solution(1, 1.0, p, kGaussianN11) ==
        Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(moment_closed_solution(2, 1.0, p, kGaussianN11) ==
        Catch::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("mean-preserving bias conserves the first moment", "[moments]") {
  const auto p = NetworkParams::constant1d(-1.0, 1.0);  // b = -w m1(0), m1(0)=1
  for (double t : {0.1, 0.7, 2.0, 5.0})
    CHECK(moment_closed_solution(1, t, p, kGaussianN11) ==
          Catch::Approx(1.0).epsilon(1e-12));
  // variance still collapses: V(t) = V0 e^{2wt}
  CHECK(variance_closed(p, kGaussianN11, 2.0) ==
        Catch::Approx(std::exp(-4.0)).epsilon(1e-10));
}

TEST_CASE("piecewise-constant tables integrate segment-exactly", "[moments]") {
  // w switches sign at t=1: Phi_1(2) = -1 + 0.5
  const auto p = NetworkParams::table1d({{0.0, -1.0, 0.0}, {1.0, 0.5, 0.0}});
  CHECK(phi_k(1, 2.0, p) == Catch::Approx(-0.5));
  CHECK(phi_k(2, 2.0, p) == Catch::Approx(-1.0));
  CHECK(moment_closed_solution(1, 2.0, p, kGaussianN11) ==
        Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("w = 0 resonant segments handled exactly", "[moments]") {
  const auto p = NetworkParams::constant1d(0.0, 0.5);
  // dm1/dt = b => m1 = 1 + 0.5 t; dm2/dt = 2 b m1 => m2 = 2 + t + 0.25 t^2
  CHECK(moment_closed_solution(1, 2.0, p, kGaussianN11) == Catch::Approx(2.0));
  CHECK(moment_closed_solution(2, 2.0, p, kGaussianN11) ==
        Catch::Approx(2.0 + 2.0 + 0.25 * 4.0));
}

TEST_CASE("closed solution derivative matches the ode rhs", "[moments]") {
  // recursive consistency via central differences, k <= 4
  const double h = 1e-6;
  for (int trial = 0; trial < 12; ++trial) {
    const double w = rng::uniform(21, trial, 0, -2, 2);
    const double b = rng::uniform(22, trial, 1, -2, 2);
    const auto p = NetworkParams::constant1d(w, b);
    for (int k = 1; k <= 4; ++k) {
      const double t = 0.3 + 0.2 * trial / 12.0;
      const auto up = moments_closed(p, kGaussianN11, t + h);
      const auto dn = moments_closed(p, kGaussianN11, t - h);
      const auto mid = moments_closed(p, kGaussianN11, t);
      const double fd = (up[k] - dn[k]) / (2.0 * h);
      const double rhs = moment_ode_rhs(k, w, b, mid[k], mid[k - 1]);
      REQUIRE(std::abs(fd - rhs) <= 1e-6 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("behavior classification", "[moments]") {
  const auto clustering =
      classify_behavior(NetworkParams::constant1d(-1.0, 0.0), kGaussianN11, 0.5, 1.5);
  CHECK(clustering.local_energy_bound);
  CHECK(clustering.energy_decay);
  CHECK(clustering.local_aggregation);
  CHECK(clustering.aggregation);
  CHECK(clustering.clustering);
  CHECK(clustering.delta_location == 0.0);

  const auto meanp =
      classify_behavior(NetworkParams::constant1d(-1.0, 1.0), kGaussianN11, 0.5, 1.5);
  CHECK(meanp.clustering);
  CHECK(meanp.delta_location == Catch::Approx(1.0));

  const auto growth =
      classify_behavior(NetworkParams::constant1d(1.0, 0.0), kGaussianN11, 0.5, 1.5);
  CHECK_FALSE(growth.local_energy_bound);
  CHECK_FALSE(growth.energy_decay);
  CHECK_FALSE(growth.local_aggregation);
  CHECK_FALSE(growth.aggregation);
  CHECK_FALSE(growth.clustering);

  CHECK_THROWS(classify_behavior(NetworkParams::constant1d(-1.0, 0.3),
                                 kGaussianN11, 0.5, 1.5));
}

TEST_CASE("energy decay implies aggregation under zero bias", "[moments]") {
  for (int trial = 0; trial < 50; ++trial) {
    const double w = rng::uniform(31, trial, 0, -2, 2);
    std::vector<double> init{1.0, rng::uniform(32, trial, 1, -1, 1), 0.0};
    init[2] = init[1] * init[1] + rng::uniform(33, trial, 2, 0.1, 2.0);
    const auto f =
        classify_behavior(NetworkParams::constant1d(w, 0.0), init, 0.3, 0.9);
    if (f.energy_decay) REQUIRE(f.aggregation);
  }
}

TEST_CASE("threshold times", "[moments]") {
  const std::vector<double> init{1.0, 0.0, 1.0};  // V(0) = 1
  const double t = threshold_time(0.01, -1.0, BiasFamily::ZeroBias,
                                  ThresholdQuantity::Variance, init);
  CHECK(t == Catch::Approx(std::log(0.01) / -2.0).epsilon(1e-12));
  // closed-solution variance at t* equals the level
  CHECK(variance_closed(NetworkParams::constant1d(-1.0, 0.0), init, t) ==
        Catch::Approx(0.01).margin(1e-9));

  CHECK(threshold_time(2.0, -1.0, BiasFamily::ZeroBias, ThresholdQuantity::Energy,
                       {1.0, 0.0, 2.0}) == 0.0);
  CHECK_THROWS(threshold_time(0.5, -1.0, BiasFamily::MeanPreserving,
                              ThresholdQuantity::Energy, kGaussianN11));
  CHECK_THROWS(threshold_time(0.5, 1.0, BiasFamily::ZeroBias,
                              ThresholdQuantity::Variance, kGaussianN11));
}

TEST_CASE("linearized activations", "[moments]") {
  CHECK(linearized_activation(ActivationFn(Activation::Tanh)) ==
        std::pair(1.0, 0.0));
  CHECK(linearized_activation(ActivationFn(Activation::Sigmoid)) ==
        std::pair(0.25, 0.5));
  CHECK(linearized_activation(ActivationFn(Activation::Identity)) ==
        std::pair(1.0, 0.0));
  CHECK_THROWS(linearized_activation(ActivationFn(Activation::ReLU)));
}
