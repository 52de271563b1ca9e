#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "kcover/errors.hpp"
#include "kcover/stats.hpp"

namespace st = kcover::stats;

TEST_CASE("upper incomplete gamma matches integer-order closed forms") {
  // Gamma(n, x) = (n-1)! e^{-x} sum_{j<n} x^j / j!
  CHECK(st::gamma_upper(1.0, 2.5) ==
        doctest::Approx(std::exp(-2.5)).epsilon(1e-12));
  CHECK(st::gamma_upper(3.0, 2.0) ==
        doctest::Approx(10.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(st::gamma_upper(4.0, 0.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(st::gamma_upper_reg(3.0, 2.0) ==
        doctest::Approx(5.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(st::gamma_upper_reg(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi-squared survival at two degrees of freedom is exponential") {
  CHECK(st::chi2_sf(2.0 * std::log(10.0), 2.0) ==
        doctest::Approx(0.1).epsilon(1e-10));
  CHECK(st::chi2_sf(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("KS statistic on hand-checked samples") {
  // Evenly offset PIT values: every empirical step is exactly 0.1 away.
  CHECK(st::ks_statistic({0.5, 0.1, 0.9, 0.3, 0.7}) ==
        doctest::Approx(0.1).epsilon(1e-12));
  // Out-of-range values clamp to the unit interval.
  CHECK(st::ks_statistic({-0.5, 1.5}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(st::ks_statistic({}), kcover::config_error);
}

TEST_CASE("KS p-value reproduces the classical 5 percent point") {
  // Q(1.36) = 2 sum_j (-1)^{j-1} exp(-2 j^2 1.36^2) = 0.049485 by hand.
  const double factor = std::sqrt(10000.0) + 0.12 + 0.11 / std::sqrt(10000.0);
  CHECK(st::ks_pvalue(1.36 / factor, 10000) ==
        doctest::Approx(0.049485).epsilon(1e-3));
  CHECK(st::ks_pvalue(1e-12, 100) == 1.0);
  // Larger deviations are less likely.
  CHECK(st::ks_pvalue(0.05, 1000) > st::ks_pvalue(0.10, 1000));
  CHECK(st::ks_pvalue(0.10, 1000) > st::ks_pvalue(0.20, 1000));
}

TEST_CASE("chi-squared goodness of fit on frozen tables") {
  const std::vector<std::int64_t> exact = {30, 50, 20};
  const std::vector<double> probs = {0.3, 0.5, 0.2};
  const auto fit = st::chi2_gof(exact, probs, 0);
  CHECK(fit.stat == doctest::Approx(0.0));
  CHECK(fit.dof == doctest::Approx(2.0));
  CHECK(fit.p == doctest::Approx(1.0));

  // Shifted counts: stat = 100/30 + 100/50 = 16/3, sf at 2 dof = e^{-8/3}.
  const std::vector<std::int64_t> shifted = {40, 40, 20};
  const auto bad = st::chi2_gof(shifted, probs, 0);
  CHECK(bad.stat == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  CHECK(bad.p == doctest::Approx(std::exp(-8.0 / 3.0)).epsilon(1e-10));

  // One estimated parameter costs one degree of freedom.
  CHECK(st::chi2_gof(shifted, probs, 1).dof == doctest::Approx(1.0));

  CHECK_THROWS_AS(st::chi2_gof(std::vector<std::int64_t>{1, 2},
                               std::vector<double>{1.0}, 0),
                  kcover::config_error);
  CHECK_THROWS_AS(st::chi2_gof(std::vector<std::int64_t>{1, 2},
                               std::vector<double>{1.0, 0.0}, 0),
                  kcover::config_error);
}

TEST_CASE("weighted least squares recovers planted coefficients") {
  const std::vector<std::vector<double>> design = {
      {1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}};
  const std::vector<double> y = {2.0, 5.0, 8.0, 11.0};  // 2 + 3x
  const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  const auto fit = st::wls(design, y, w);
  REQUIRE(fit.coef.size() == 2);
  CHECK(fit.coef[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.coef[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.chi2 == doctest::Approx(0.0));
  CHECK(fit.dof == 2);
}

TEST_CASE("weighted least squares standard error of a weighted mean") {
  // Four observations with sigma = 2: se of the mean is sigma / sqrt(4) = 1.
  const std::vector<std::vector<double>> design = {{1.0}, {1.0}, {1.0}, {1.0}};
  const std::vector<double> y = {4.0, 6.0, 4.0, 6.0};
  const std::vector<double> w = {0.25, 0.25, 0.25, 0.25};
  const auto fit = st::wls(design, y, w);
  CHECK(fit.coef[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fit.se[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.chi2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.dof == 3);
}

TEST_CASE("weighted least squares rejects singular designs") {
  const std::vector<std::vector<double>> design = {
      {1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
  const std::vector<double> y = {1.0, 2.0, 3.0};
  const std::vector<double> w = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(st::wls(design, y, w), kcover::config_error);
}

TEST_CASE("sample moments") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const auto m = st::moments(xs);
  CHECK(m.mean == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(m.count == 4);
}
