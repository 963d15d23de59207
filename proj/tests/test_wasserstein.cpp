#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "kinn/initial.hpp"
#include "kinn/rng.hpp"
#include "kinn/wasserstein.hpp"

using namespace kinn;

TEST_CASE("wasserstein basics", "[wasserstein]") {
  CHECK(wasserstein1_1d({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(wasserstein1_1d({0.0}, {1.0}) == Catch::Approx(1.0));
  CHECK_THROWS(wasserstein1_1d(std::vector<double>{}, {1.0}));
}

TEST_CASE("wasserstein matches the brute-force pairing", "[wasserstein]") {
  // two pairings for a={0,1}, b={0,3}: sorted (1+2... ) vs crossed
  const double sorted_cost = (std::abs(0.0 - 0.0) + std::abs(1.0 - 3.0)) / 2.0;
  const double crossed_cost = (std::abs(0.0 - 3.0) + std::abs(1.0 - 0.0)) / 2.0;
  CHECK(wasserstein1_1d({0.0, 1.0}, {0.0, 3.0}) ==
        Catch::Approx(std::min(sorted_cost, crossed_cost)));
}

TEST_CASE("wasserstein metric properties on random triples", "[wasserstein]") {
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(5), b(5), c(7);
    for (int i = 0; i < 5; ++i) {
      a[i] = rng::uniform(11, trial, i, -2, 2);
      b[i] = rng::uniform(12, trial, i, -2, 2);
    }
    for (int i = 0; i < 7; ++i) c[i] = rng::uniform(13, trial, i, -2, 2);
    const double ab = wasserstein1_1d(a, b);
    REQUIRE(ab == wasserstein1_1d(b, a));  // symmetry (equal sizes, exact)
    const double ac = wasserstein1_1d(a, c);
    const double cb = wasserstein1_1d(c, b);
    REQUIRE(ab <= ac + cb + 1e-12);  // triangle inequality
  }
}

TEST_CASE("unequal sizes use the cdf distance", "[wasserstein]") {
  // {0} vs {0,1}: CDFs differ by 1/2 on [0,1]
  CHECK(wasserstein1_1d({0.0}, {0.0, 1.0}) == Catch::Approx(0.5));
  // subdividing one sample should not change the measure
  CHECK(wasserstein1_1d({0.0, 0.0}, {0.0, 1.0}) == Catch::Approx(0.5));
}

TEST_CASE("samples against a density field", "[wasserstein]") {
  Grid g = Grid::make1d(-6, 6, 400);
  const auto f = gaussian_field(g, Boundary::Outflow, 0.0, 1.0);
  std::vector<double> xs(200000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = rng::normal01(3, i, 0);
  const double d = wasserstein1_1d(xs, f);
  CHECK(d < 6e-3);  // CLT floor ~ 2/sqrt(M) plus discretization

  // shifted samples sit at distance ~ shift
  for (auto& x : xs) x += 0.5;
  CHECK(wasserstein1_1d(xs, f) == Catch::Approx(0.5).margin(0.01));
}
