#include "kcover/window_stats.hpp"

#include <algorithm>
#include <cmath>

#include "kcover/errors.hpp"
#include "kcover/point_process.hpp"

namespace kcover {

WindowConfig WindowConfig::make(double n, int d, int k, double lambda0) {
  if (!(n >= 3.0)) throw config_error("window needs n >= 3");
  if (d < 1 || d > kMaxDim) throw config_error("window dimension out of range");
  if (k < 1) throw config_error("window needs k >= 1");
  WindowConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.k = k;
  cfg.lambda0 = lambda0;
  cfg.log_term = std::log(n) + (d + k - 2) * std::log(std::log(n));
  const double occupancy = cfg.log_term + lambda0;
  if (!(occupancy > 0.0))
    throw config_error("window lower edge has nonpositive ball occupancy");
  const double wd = unit_ball_volume(d);
  cfg.r0 = std::pow(occupancy / (n * wd), 1.0 / d);
  cfg.R0 = std::sqrt(cfg.r0);
  if (!(cfg.r0 < cfg.R0) || cfg.R0 > kRMax)
    throw config_error("window edges violate r0 < sqrt(r0) <= 1/4");
  cfg.lambda_cap = cfg.mark_of(cfg.R0);
  return cfg;
}

double WindowConfig::mark_of(double rho) const {
  return n * unit_ball_volume(d) * std::pow(rho, d) - log_term;
}

double WindowConfig::rho_of(double mark) const {
  return std::pow((mark + log_term) / (n * unit_ball_volume(d)), 1.0 / d);
}

std::vector<MarkedPoint> collect_xi(const SpatialIndex& index,
                                    const WindowConfig& cfg) {
  if (index.cloud().dim() != cfg.d)
    throw config_error("cloud dimension does not match the window config");
  EnumerationWindow win;
  win.r_min = cfg.r0;
  win.r_max = cfg.R0;
  win.mu_min = cfg.d;
  win.mu_max = cfg.d;
  std::vector<MarkedPoint> out;
  const std::vector<CriticalPoint> crits =
      enumerate_high_window(index, cfg.k, win).crits;
  out.reserve(crits.size());
  for (const CriticalPoint& c : crits)
    out.push_back({c.center, cfg.mark_of(c.rho), c.rho});
  return out;
}

double window_gamma_mass(const WindowConfig& cfg) {
  const double s = cfg.d + cfg.k - 1;
  const double lo = cfg.log_term + cfg.lambda0;
  const double hi = cfg.log_term + cfg.lambda_cap;
  return stats::gamma_upper(s, lo) - stats::gamma_upper(s, hi);
}

double exact_mark_cdf(const WindowConfig& cfg, double mark) {
  const double s = cfg.d + cfg.k - 1;
  const double lo = cfg.log_term + cfg.lambda0;
  const double hi = cfg.log_term + cfg.lambda_cap;
  const double x = std::clamp(cfg.log_term + mark, lo, hi);
  const double total = stats::gamma_upper(s, lo) - stats::gamma_upper(s, hi);
  if (!(total > 0.0)) return 1.0;
  return (stats::gamma_upper(s, lo) - stats::gamma_upper(s, x)) / total;
}

GofReport gof_poisson(const std::vector<std::vector<MarkedPoint>>& samples,
                      const WindowConfig& cfg) {
  if (samples.size() < 500)
    throw insufficient_data_error("goodness of fit needs at least 500 trials");

  GofReport rep;
  rep.trial_count = samples.size();

  std::vector<double> counts(samples.size());
  std::size_t max_count = 0;
  for (std::size_t t = 0; t < samples.size(); ++t) {
    counts[t] = static_cast<double>(samples[t].size());
    max_count = std::max(max_count, samples[t].size());
  }
  rep.count_histogram.assign(max_count + 1, 0);
  for (const auto& s : samples) ++rep.count_histogram[s.size()];

  const stats::Moments m = stats::moments(counts);
  rep.mean_count = m.mean;
  if (!(m.mean > 0.0))
    throw insufficient_data_error("all trials empty; dispersion undefined");
  rep.dispersion = m.variance / m.mean;
  rep.c_hat_raw = m.mean;
  rep.c_hat_debiased = m.mean / (cfg.n * window_gamma_mass(cfg));

  // Count GOF on bins {0, 1, 2, >=3} against Poisson(sample mean); the
  // estimated mean costs one degree of freedom.
  {
    std::int64_t bins[4] = {0, 0, 0, 0};
    for (const auto& s : samples) bins[std::min<std::size_t>(s.size(), 3)]++;
    const double c = m.mean;
    const double p0 = std::exp(-c);
    const double p1 = p0 * c;
    const double p2 = p1 * c / 2.0;
    const double probs[4] = {p0, p1, p2, std::max(1e-300, 1.0 - p0 - p1 - p2)};
    rep.counts_vs_poisson = stats::chi2_gof(bins, probs, 1);
  }

  // Pooled marks. The limit theory makes mark - lambda0 unit exponential;
  // the exact finite-n law carries the occupancy tilt, so both transforms
  // are reported. Marks beyond the window cap cannot be produced by
  // construction; they are counted defensively and excluded.
  std::vector<double> pit_limit, pit_exact;
  for (const auto& s : samples) {
    for (const MarkedPoint& mp : s) {
      if (mp.mark > cfg.lambda_cap + 1e-12) {
        ++rep.truncated_marks;
        continue;
      }
      pit_limit.push_back(1.0 - std::exp(-(mp.mark - cfg.lambda0)));
      pit_exact.push_back(exact_mark_cdf(cfg, mp.mark));
    }
  }
  rep.ks_sample_size = pit_limit.size();
  if (!pit_limit.empty()) {
    rep.ks_marks_stat = stats::ks_statistic(pit_limit);
    rep.ks_marks_p = stats::ks_pvalue(rep.ks_marks_stat, pit_limit.size());
    rep.ks_exact_stat = stats::ks_statistic(pit_exact);
    rep.ks_exact_p = stats::ks_pvalue(rep.ks_exact_stat, pit_exact.size());
  }

  // Locations against uniformity over a 4^d partition.
  {
    std::size_t cells = 1;
    for (int a = 0; a < cfg.d; ++a) cells *= 4;
    std::vector<std::int64_t> occ(cells, 0);
    for (const auto& s : samples)
      for (const MarkedPoint& mp : s) {
        std::size_t id = 0;
        for (int a = cfg.d - 1; a >= 0; --a) {
          int cell = static_cast<int>(mp.location.x[a] * 4.0);
          cell = std::clamp(cell, 0, 3);
          id = id * 4 + static_cast<std::size_t>(cell);
        }
        ++occ[id];
      }
    const std::vector<double> probs(cells, 1.0 / static_cast<double>(cells));
    rep.spatial_uniformity = stats::chi2_gof(occ, probs, 0);
  }
  return rep;
}

std::vector<CoverageRow> coverage_probability_check(
    double n, int d, int k, std::span<const double> lambda0s,
    std::size_t trials, std::uint64_t master_seed) {
  if (lambda0s.empty()) throw config_error("coverage check needs lambda0 values");
  if (trials == 0) throw config_error("coverage check needs trials >= 1");

  std::vector<WindowConfig> cfgs;
  cfgs.reserve(lambda0s.size());
  for (const double l0 : lambda0s) cfgs.push_back(WindowConfig::make(n, d, k, l0));
  const WindowConfig ref = WindowConfig::make(n, d, k, 0.0);

  double r_lo = ref.r0;
  for (const WindowConfig& cfg : cfgs) r_lo = std::min(r_lo, cfg.r0);

  std::vector<std::size_t> covered(cfgs.size(), 0);
  std::size_t degenerate = 0;
  std::size_t good = 0;
  double ref_count_sum = 0.0;

  for (std::size_t t = 0; t < trials; ++t) {
    const SeedSpec seed{master_seed, static_cast<std::uint32_t>(t)};
    const PointCloud cloud = sample_poisson(n, d, seed);
    try {
      const SpatialIndex index(cloud,
                               SpatialIndex::default_cell_size(cloud.size(), k, d));
      EnumerationWindow win;
      win.r_min = r_lo;
      win.r_max = kRMax;
      win.mu_min = d;
      win.mu_max = d;
      const HighWindowResult high = enumerate_high_window(index, k, win);
      if (high.bound.upper > kRMax)
        throw degenerate_error("vacancy scale beyond the regime bound");
      const std::vector<CriticalPoint>& crits = high.crits;
      for (std::size_t j = 0; j < cfgs.size(); ++j) {
        bool any = false;
        for (const CriticalPoint& c : crits)
          if (c.rho > cfgs[j].r0) {
            any = true;
            break;
          }
        if (!any) ++covered[j];
      }
      std::size_t in_ref = 0;
      for (const CriticalPoint& c : crits)
        if (c.rho > ref.r0 && c.rho <= ref.R0) ++in_ref;
      ref_count_sum += static_cast<double>(in_ref);
      ++good;
    } catch (const degenerate_error&) {
      ++degenerate;
    }
  }
  if (good == 0) throw insufficient_data_error("every trial was degenerate");

  const double c_ref = ref_count_sum / static_cast<double>(good);
  const double ref_mass = window_gamma_mass(ref);

  std::vector<CoverageRow> rows;
  rows.reserve(cfgs.size());
  for (std::size_t j = 0; j < cfgs.size(); ++j) {
    CoverageRow row;
    row.lambda0 = lambda0s[j];
    row.trials = good;
    row.degenerate = degenerate;
    row.covered_frac = static_cast<double>(covered[j]) / static_cast<double>(good);
    row.se = std::sqrt(std::max(0.0, row.covered_frac * (1.0 - row.covered_frac) /
                                         static_cast<double>(good)));
    row.predicted_limit = std::exp(-c_ref * std::exp(-lambda0s[j]));
    row.predicted_exact =
        std::exp(-c_ref * window_gamma_mass(cfgs[j]) / ref_mass);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kcover
