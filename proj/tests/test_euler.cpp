#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "kcover/critical_points.hpp"
#include "kcover/errors.hpp"
#include "kcover/euler.hpp"
#include "kcover/grid_index.hpp"
#include "kcover/point_process.hpp"
#include "oracles.hpp"

using kcover::CriticalPoint;
using kcover::EnumerationWindow;
using kcover::SpatialIndex;

TEST_CASE("two antipodal points on the circle, plain coverage") {
  const auto cloud = oracles::cloud_from({0.0, 0.5}, 1);
  const SpatialIndex index(cloud, 0.25);
  EnumerationWindow win;
  const auto crits = kcover::enumerate_critical_points(index, 1, win);

  // Two midpoint saddles, both at distance exactly 1/4.
  REQUIRE(crits.size() == 2);
  for (const auto& c : crits) {
    CHECK(c.mu == 1);
    CHECK(c.delta == 1);
    CHECK(c.rho == doctest::Approx(0.25).epsilon(1e-12));
  }

  // Two arcs below the merge radius, a full circle at it.
  CHECK(kcover::euler_characteristic(crits, 0.10, 1, 2) == 2);
  CHECK(kcover::euler_characteristic(crits, 0.24, 1, 2) == 2);
  CHECK(kcover::euler_characteristic(crits, 0.25, 1, 2) == 0);
}

TEST_CASE("two antipodal points on the circle, double coverage") {
  const auto cloud = oracles::cloud_from({0.0, 0.5}, 1);
  const SpatialIndex index(cloud, 0.25);
  EnumerationWindow win;
  const auto crits = kcover::enumerate_critical_points(index, 2, win);

  // The doubly covered region is born at the two midpoints.
  REQUIRE(crits.size() == 2);
  for (const auto& c : crits) {
    CHECK(c.mu == 0);
    CHECK(c.delta == 1);
    CHECK(c.rho == doctest::Approx(0.25).epsilon(1e-12));
  }

  CHECK(kcover::euler_characteristic(crits, 0.20, 2, 2) == 0);
  // At r = 0.3 the doubly covered set is two disjoint arcs. The index-1
  // points that would close it up sit at distance 1/2, beyond the regime.
  CHECK(kcover::euler_characteristic(crits, 0.30, 2, 2) == 2);
}

TEST_CASE("euler characteristic argument validation") {
  CHECK(kcover::euler_characteristic({}, 0.0, 1, 7) == 7);
  CHECK(kcover::euler_characteristic({}, 0.0, 2, 7) == 0);
  CHECK_THROWS_AS(kcover::euler_characteristic({}, 0.1, 0, 3),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::euler_characteristic({}, -0.1, 1, 3),
                  kcover::config_error);
}

TEST_CASE("circle components match the gap census") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto cloud = oracles::random_cloud(40, 1, 900 + seed);
    const SpatialIndex index(cloud, 0.25);
    EnumerationWindow win;
    const auto crits = kcover::enumerate_critical_points(index, 1, win);

    std::vector<double> xs(cloud.coords().begin(), cloud.coords().end());
    std::sort(xs.begin(), xs.end());
    for (const double r : {0.001, 0.003, 0.01, 0.02, 0.05, 0.1, 0.2, 0.25}) {
      std::int64_t arcs = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double gap = (i + 1 < xs.size()) ? xs[i + 1] - xs[i]
                                               : xs[0] + 1.0 - xs.back();
        if (gap > 2.0 * r) ++arcs;
      }
      CHECK(kcover::euler_characteristic(crits, r, 1,
                                         static_cast<std::int64_t>(xs.size())) ==
            arcs);
    }
  }
}

TEST_CASE("alternating critical counts close up on the torus") {
  // Once r exceeds the largest k-NN value the covered set is the whole
  // torus, whose Euler characteristic vanishes; the signed census of all
  // critical points must agree.
  for (int k = 1; k <= 3; ++k) {
    for (std::uint32_t s = 0; s < 8; ++s) {
      const auto cloud = kcover::sample_poisson(
          300.0, 2,
          kcover::SeedSpec{static_cast<std::uint64_t>(7700 + k), s});
      const SpatialIndex index(
          cloud, SpatialIndex::default_cell_size(cloud.size(), k, 2));
      const auto ceiling = kcover::critical_value_ceiling(index, k);
      REQUIRE(ceiling.upper <= 0.25);

      EnumerationWindow win;
      win.r_max = ceiling.upper;
      const auto crits = kcover::enumerate_critical_points(index, k, win);
      CHECK(kcover::euler_characteristic(
                crits, 0.25, k, static_cast<std::int64_t>(cloud.size())) == 0);
    }
  }
}

TEST_CASE("expected euler curve matches the circle law") {
  // d = 1, k = 1: E[chi]/n = e^{-occupancy}, exactly, for Poisson clouds.
  const double n = 500.0;
  const std::vector<double> lambdas = {1.0, 2.0, 3.0};
  const auto rows = kcover::expected_euler_curve(n, 1, 1, lambdas, 150, 31337);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].lambda == lambdas[i]);
    CHECK(rows[i].r == doctest::Approx(lambdas[i] / (2.0 * n)).epsilon(1e-12));
    CHECK(rows[i].trials + rows[i].degenerate == 150);
    const double expect = std::exp(-lambdas[i]);
    CHECK(std::abs(rows[i].mean_chi / n - expect) <
          5.0 * rows[i].se / n + 1e-9);
  }

  // Identical seeds reproduce the curve bit for bit.
  const auto again = kcover::expected_euler_curve(n, 1, 1, lambdas, 150, 31337);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].mean_chi == again[i].mean_chi);
    CHECK(rows[i].se == again[i].se);
  }

  const auto fit = kcover::fit_euler_form(rows, n, 1, 1);
  REQUIRE(fit.coef.size() == 1);
  CHECK(std::abs(fit.coef[0] - 1.0) < 0.03);
}

TEST_CASE("curve fitting recovers planted polynomial coefficients") {
  // Shape e^{-lambda}(A0 + A1 lambda) with A0 = 2, A1 = -0.7.
  const double n = 1000.0;
  std::vector<kcover::EulerRow> rows;
  for (const double lam : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
    kcover::EulerRow row;
    row.lambda = lam;
    row.r = std::sqrt(lam / (n * M_PI));
    row.mean_chi = n * std::exp(-lam) * (2.0 - 0.7 * lam);
    row.se = 1e-6;
    row.trials = 100;
    rows.push_back(row);
  }
  const auto fit = kcover::fit_euler_form(rows, n, 2, 1);
  REQUIRE(fit.coef.size() == 2);
  CHECK(fit.coef[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.coef[1] == doctest::Approx(-0.7).epsilon(1e-6));

  CHECK_THROWS_AS(
      kcover::fit_euler_form(std::vector<kcover::EulerRow>(rows.begin(),
                                                           rows.begin() + 1),
                             n, 2, 2),
      kcover::config_error);
}

TEST_CASE("expected euler curve validates its grid") {
  const std::vector<double> negative = {-1.0};
  const std::vector<double> too_far = {300.0};
  const std::vector<double> fine = {1.0};
  CHECK_THROWS_AS(kcover::expected_euler_curve(500.0, 1, 1, negative, 10, 1),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::expected_euler_curve(500.0, 1, 1, too_far, 10, 1),
                  kcover::config_error);
  CHECK_THROWS_AS(kcover::expected_euler_curve(500.0, 1, 1, fine, 0, 1),
                  kcover::config_error);
}
