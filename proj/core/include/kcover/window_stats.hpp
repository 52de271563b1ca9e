#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kcover/critical_points.hpp"
#include "kcover/stats.hpp"

namespace kcover {

// Radius window in which the deepest vacant components die. The lower edge
// r0 solves n * omega_d * r0^d = log n + (d+k-2) loglog n + lambda0 and the
// upper edge is sqrt(r0), which must stay within the regime bound 1/4.
struct WindowConfig {
  double n = 0.0;
  int d = 0;
  int k = 0;
  double lambda0 = 0.0;
  double log_term = 0.0;  // log n + (d+k-2) loglog n
  double r0 = 0.0;
  double R0 = 0.0;
  double lambda_cap = 0.0;  // mark value at rho = R0

  static WindowConfig make(double n, int d, int k, double lambda0);

  // Mark of a critical point of radius rho: the ball occupancy
  // n * omega_d * rho^d recentered by the coverage threshold.
  double mark_of(double rho) const;
  double rho_of(double mark) const;
};

// A window critical point: location, recentered size, raw radius.
struct MarkedPoint {
  TorusPoint location;
  double mark = 0.0;
  double rho = 0.0;
};

// All local maxima (index d) of the k-NN distance function with radius in
// (r0, R0], each with its mark. Throws what enumeration throws; statistical
// drivers treat those trials as degenerate.
std::vector<MarkedPoint> collect_xi(const SpatialIndex& index,
                                    const WindowConfig& cfg);

// Poisson-process goodness of fit over many independent trials.
struct GofReport {
  std::size_t trial_count = 0;
  std::vector<std::int64_t> count_histogram;  // index = per-trial count
  double mean_count = 0.0;
  double dispersion = 0.0;  // sample variance / sample mean of counts
  stats::Chi2Result counts_vs_poisson;  // bins {0,1,2,>=3}, mean estimated
  double ks_marks_stat = 0.0;  // pooled marks - lambda0 vs Exp(1)
  double ks_marks_p = 1.0;
  std::size_t ks_sample_size = 0;
  std::size_t truncated_marks = 0;  // marks beyond the window cap (excluded)
  double ks_exact_stat = 0.0;  // same sample vs the exact finite-n mark law
  double ks_exact_p = 1.0;
  stats::Chi2Result spatial_uniformity;  // locations over 4^d cells
  double c_hat_raw = 0.0;       // pooled mean count per trial
  double c_hat_debiased = 0.0;  // raw / (n * window mass of the exact law)
};

GofReport gof_poisson(const std::vector<std::vector<MarkedPoint>>& samples,
                      const WindowConfig& cfg);

// Exact first-moment window mass: the expected count in (r0, R0] equals
// constant * n * this factor, via the occupancy change of variables.
double window_gamma_mass(const WindowConfig& cfg);

// CDF of the exact finite-n mark law on [lambda0, lambda_cap], used both for
// the PIT diagnostic and for exact coverage predictions.
double exact_mark_cdf(const WindowConfig& cfg, double mark);

struct CoverageRow {
  double lambda0 = 0.0;
  std::size_t trials = 0;
  std::size_t degenerate = 0;
  double covered_frac = 0.0;
  double se = 0.0;               // binomial standard error
  double predicted_limit = 0.0;  // exp(-c_ref * exp(-lambda0))
  double predicted_exact = 0.0;  // exp(-c_ref * exact window-mass ratio)
};

// Sweeps lambda0 over a shared set of trials (common random numbers): per
// trial one enumeration decides coverage at every lambda0. The reference
// count c_ref is the pooled mean at lambda0 = 0 from the same trials.
std::vector<CoverageRow> coverage_probability_check(
    double n, int d, int k, std::span<const double> lambda0s,
    std::size_t trials, std::uint64_t master_seed);

}  // namespace kcover
