#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kcover/critical_points.hpp"
#include "kcover/stats.hpp"

namespace kcover {

// Euler characteristic of the k-fold coverage region at radius r, as the
// alternating sum of homology-change counts over critical values <= r.
// `crits` must be a complete enumeration of (0, r'] for some r' >= r. For
// k == 1 every sample point is an index-0 critical point at level zero, and
// the enumeration never reports those, so the cloud size enters here.
std::int64_t euler_characteristic(std::span<const CriticalPoint> crits,
                                  double r, int k, std::int64_t cloud_size);

struct EulerRow {
  double lambda = 0.0;  // expected ball occupancy n * omega_d * r^d
  double r = 0.0;
  double mean_chi = 0.0;
  double se = 0.0;
  std::size_t trials = 0;      // non-degenerate trials aggregated
  std::size_t degenerate = 0;  // excluded trials
};

// Monte Carlo mean of the Euler characteristic across a grid of occupancy
// values. Deterministic in master_seed; trials at different grid points use
// disjoint seed streams.
std::vector<EulerRow> expected_euler_curve(double n, int d, int k,
                                           std::span<const double> lambdas,
                                           std::size_t trials,
                                           std::uint64_t master_seed);

// Weighted least squares fit of mean_chi / n = exp(-lambda) * sum_i A_i
// lambda^i with i = 0 .. d+k-2 and A_0 left free; coef[i] estimates A_i.
// Zero-variance rows get a half-count variance floor so weights stay finite.
stats::WlsFit fit_euler_form(std::span<const EulerRow> rows, double n, int d,
                             int k);

}  // namespace kcover
