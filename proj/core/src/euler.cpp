#include "kcover/euler.hpp"

#include <cmath>

#include "kcover/errors.hpp"
#include "kcover/point_process.hpp"

namespace kcover {

std::int64_t euler_characteristic(std::span<const CriticalPoint> crits,
                                  double r, int k, std::int64_t cloud_size) {
  if (k < 1) throw config_error("euler characteristic needs k >= 1");
  if (!(r >= 0.0)) throw config_error("euler characteristic needs r >= 0");
  std::int64_t chi = (k == 1) ? cloud_size : 0;
  for (const CriticalPoint& c : crits) {
    if (c.rho > r) continue;
    chi += (c.mu % 2 == 0) ? c.delta : -c.delta;
  }
  return chi;
}

std::vector<EulerRow> expected_euler_curve(double n, int d, int k,
                                           std::span<const double> lambdas,
                                           std::size_t trials,
                                           std::uint64_t master_seed) {
  if (!(n >= 3.0)) throw config_error("euler curve needs n >= 3");
  if (k < 1) throw config_error("euler curve needs k >= 1");
  if (trials == 0) throw config_error("euler curve needs trials >= 1");
  if (lambdas.empty()) throw config_error("euler curve needs occupancy values");

  const double wd = unit_ball_volume(d);
  std::vector<EulerRow> rows;
  rows.reserve(lambdas.size());
  std::uint32_t trial_counter = 0;

  for (const double lambda : lambdas) {
    if (!(lambda > 0.0)) throw config_error("occupancy values must be positive");
    const double r = std::pow(lambda / (n * wd), 1.0 / d);
    if (r > kRMax)
      throw config_error("occupancy value puts the radius beyond the regime bound");

    EulerRow row;
    row.lambda = lambda;
    row.r = r;
    double sum = 0.0, sum2 = 0.0;
    std::size_t good = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const SeedSpec seed{master_seed, trial_counter++};
      const PointCloud cloud = sample_poisson(n, d, seed);
      try {
        const SpatialIndex index(
            cloud, SpatialIndex::default_cell_size(cloud.size(), k, d));
        EnumerationWindow win;
        win.r_max = r;
        const std::vector<CriticalPoint> crits =
            enumerate_critical_points(index, k, win);
        const double chi = static_cast<double>(euler_characteristic(
            crits, r, k, static_cast<std::int64_t>(cloud.size())));
        sum += chi;
        sum2 += chi * chi;
        ++good;
      } catch (const degenerate_error&) {
        ++row.degenerate;
      }
    }
    if (good == 0) throw insufficient_data_error("every trial was degenerate");
    row.trials = good;
    row.mean_chi = sum / static_cast<double>(good);
    if (good > 1) {
      const double var =
          (sum2 - sum * sum / static_cast<double>(good)) /
          static_cast<double>(good - 1);
      row.se = std::sqrt(std::max(0.0, var) / static_cast<double>(good));
    }
    rows.push_back(row);
  }
  return rows;
}

stats::WlsFit fit_euler_form(std::span<const EulerRow> rows, double n, int d,
                             int k) {
  if (k < 1) throw config_error("euler fit needs k >= 1");
  const std::size_t p = static_cast<std::size_t>(d + k - 2) + 1;
  if (rows.size() < p)
    throw config_error("euler fit needs at least as many rows as coefficients");

  std::vector<std::vector<double>> design;
  std::vector<double> y, w;
  design.reserve(rows.size());
  for (const EulerRow& row : rows) {
    std::vector<double> x(p);
    const double e = std::exp(-row.lambda);
    double pow_l = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      x[j] = e * pow_l;
      pow_l *= row.lambda;
    }
    design.push_back(std::move(x));
    y.push_back(row.mean_chi / n);
    const double floor_se =
        0.5 / std::sqrt(static_cast<double>(std::max<std::size_t>(row.trials, 1)));
    const double se_y = std::max(row.se, floor_se) / n;
    w.push_back(1.0 / (se_y * se_y));
  }
  return stats::wls(design, y, w);
}

}  // namespace kcover
