#include "kcover/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "kcover/critical_points.hpp"
#include "kcover/errors.hpp"
#include "kcover/geometry.hpp"
#include "kcover/grid_index.hpp"
#include "kcover/point_process.hpp"

namespace kcover {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void validate(const SweepConfig& cfg) {
  if (cfg.d < 1 || cfg.d > kMaxDim)
    throw config_error("sweep needs 1 <= d <= 8");
  if (cfg.k < 1) throw config_error("sweep needs k >= 1");
  if (cfg.trials == 0) throw config_error("sweep needs trials >= 1");
  if (cfg.n_values.empty()) throw config_error("sweep needs at least one n");
  if (cfg.w_values.empty()) throw config_error("sweep needs at least one w");
  if (cfg.mu_targets.empty())
    throw config_error("sweep needs at least one target index");
  for (double n : cfg.n_values)
    if (!(n >= 3.0)) throw config_error("sweep needs n >= 3");
  for (int mu : cfg.mu_targets)
    if (mu < 0 || mu > cfg.d)
      throw config_error("target index must lie in [0, d]");
  if (cfg.threads < 1) throw config_error("sweep needs threads >= 1");
}

}  // namespace

std::vector<SweepCell> sweep_cells(const SweepConfig& cfg, double n) {
  validate(cfg);
  const double wd = unit_ball_volume(cfg.d);
  const double loglog = std::log(std::log(n));
  std::vector<SweepCell> cells;
  cells.reserve(cfg.w_values.size() * cfg.mu_targets.size());
  for (double w : cfg.w_values) {
    for (int mu : cfg.mu_targets) {
      SweepCell cell;
      cell.n = n;
      cell.w = w;
      cell.mu = mu;
      cell.lambda = std::log(n) + (mu + cfg.k - 2) * loglog + w;
      if (!(cell.lambda > 0.0))
        throw config_error("occupancy is not positive at this (n, w, mu)");
      cell.r = std::pow(cell.lambda / (n * wd), 1.0 / cfg.d);
      if (cell.r > kRMax)
        throw config_error("probe radius exceeds the regime bound 1/4");
      cells.push_back(cell);
    }
  }
  return cells;
}

namespace detail {

void for_each_trial(std::size_t trials, int threads,
                    const std::function<void(std::size_t)>& body) {
  if (threads < 1) throw config_error("worker pool needs threads >= 1");
  const int workers =
      static_cast<int>(std::min<std::size_t>(trials, threads));
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        body(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  SweepResult result;
  result.records.resize(cfg.n_values.size() * cfg.trials);

  const int mu_lo =
      *std::min_element(cfg.mu_targets.begin(), cfg.mu_targets.end());
  const int mu_hi =
      *std::max_element(cfg.mu_targets.begin(), cfg.mu_targets.end());

  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    const double n = cfg.n_values[ni];
    const auto cells = sweep_cells(cfg, n);
    double r_low = kRMax;
    for (const auto& cell : cells) r_low = std::min(r_low, cell.r);
    result.cells.insert(result.cells.end(), cells.begin(), cells.end());

    detail::for_each_trial(cfg.trials, cfg.threads, [&](std::size_t t) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint32_t tid =
          static_cast<std::uint32_t>(ni * cfg.trials + t);
      const SeedSpec seed{cfg.master_seed, tid};
      TrialRecord rec;
      rec.trial_id = tid;
      rec.seed = seed.stream();
      try {
        const PointCloud cloud = sample_poisson(n, cfg.d, seed);
        rec.point_count = cloud.size();
        const SpatialIndex index(
            cloud,
            SpatialIndex::default_cell_size(cloud.size(), cfg.k, cfg.d));
        EnumerationWindow win;
        win.r_min = r_low;
        win.r_max = kRMax;
        win.mu_min = mu_lo;
        win.mu_max = mu_hi;
        const std::vector<CriticalPoint> crits =
            enumerate_high_window(index, cfg.k, win).crits;
        rec.counts.reserve(cells.size());
        rec.covered.reserve(cells.size());
        for (const auto& cell : cells) {
          const std::int64_t c = count_by_index(crits, cell.mu, cell.r);
          rec.counts.push_back(c);
          rec.covered.push_back(cell.mu == cfg.d ? (c == 0 ? 1 : 0)
                                                 : std::int8_t{-1});
        }
      } catch (const degenerate_error&) {
        rec.degenerate = true;
        rec.counts.clear();
        rec.covered.clear();
      }
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      result.records[tid] = std::move(rec);
    });

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      SweepRow row;
      row.n = cells[ci].n;
      row.w = cells[ci].w;
      row.mu = cells[ci].mu;
      row.lambda = cells[ci].lambda;
      row.r = cells[ci].r;
      double sum = 0.0, sum2 = 0.0;
      std::size_t zero = 0, good = 0;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const TrialRecord& rec = result.records[ni * cfg.trials + t];
        if (rec.degenerate) {
          ++row.degenerate;
          continue;
        }
        const double c = static_cast<double>(rec.counts[ci]);
        sum += c;
        sum2 += c * c;
        if (rec.counts[ci] == 0) ++zero;
        ++good;
      }
      if (good == 0)
        throw insufficient_data_error("every trial in a sweep cell was degenerate");
      row.trials_used = good;
      const double g = static_cast<double>(good);
      row.p_zero = static_cast<double>(zero) / g;
      row.p_zero_se = std::sqrt(row.p_zero * (1.0 - row.p_zero) / g);
      row.mean = sum / g;
      row.variance =
          good > 1 ? std::max(0.0, (sum2 - sum * sum / g) / (g - 1.0)) : 0.0;
      row.mean_se = std::sqrt(row.variance / g);
      result.rows.push_back(row);
    }
  }
  return result;
}

std::vector<VarianceRow> variance_rows(const SweepResult& result) {
  std::vector<VarianceRow> out;
  const std::size_t cell_count = result.rows.size();
  if (cell_count == 0) return out;
  // Cells and records are both n-major blocks; every non-degenerate record
  // holds one count per cell of its own n block.
  std::size_t cells_per_n = cell_count;
  for (const TrialRecord& rec : result.records)
    if (!rec.degenerate) {
      cells_per_n = rec.counts.size();
      break;
    }
  const std::size_t n_blocks = cell_count / cells_per_n;
  const std::size_t trials = result.records.size() / n_blocks;
  for (std::size_t ci = 0; ci < cell_count; ++ci) {
    const SweepRow& row = result.rows[ci];
    const std::size_t ni = ci / cells_per_n;
    const std::size_t local = ci % cells_per_n;
    std::vector<double> xs;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& rec = result.records[ni * trials + t];
      if (!rec.degenerate) xs.push_back(static_cast<double>(rec.counts[local]));
    }

    VarianceRow v;
    v.n = row.n;
    v.w = row.w;
    v.mu = row.mu;
    v.lambda = row.lambda;
    v.r = row.r;
    v.trials_used = xs.size();
    v.degenerate = row.degenerate;
    v.mean = row.mean;
    v.variance = row.variance;
    if (row.mean >= 0.05 && xs.size() >= 3) {
      v.ratio = row.variance / row.mean;
      // Leave-one-out jackknife for the dispersion index.
      const double T = static_cast<double>(xs.size());
      double S = 0.0, S2 = 0.0;
      for (double x : xs) {
        S += x;
        S2 += x * x;
      }
      std::vector<double> reps;
      reps.reserve(xs.size());
      bool ok = true;
      for (double x : xs) {
        const double m = (S - x) / (T - 1.0);
        const double var =
            std::max(0.0, (S2 - x * x - (S - x) * (S - x) / (T - 1.0)) /
                              (T - 2.0));
        if (!(m > 0.0)) {
          ok = false;
          break;
        }
        reps.push_back(var / m);
      }
      if (ok) {
        double rbar = 0.0;
        for (double rep : reps) rbar += rep;
        rbar /= T;
        double ss = 0.0;
        for (double rep : reps) ss += (rep - rbar) * (rep - rbar);
        v.ratio_se = std::sqrt((T - 1.0) / T * ss);
        v.ratio_defined = true;
      }
    }
    out.push_back(v);
  }
  return out;
}

std::vector<VarianceRow> run_variance_check(const SweepConfig& cfg) {
  return variance_rows(run_sweep(cfg));
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "n,w,mu,lambda,r,trials,degenerate,p_zero,p_zero_se,mean,variance,"
        "mean_se\n";
  for (const auto& r : rows) {
    os << g17(r.n) << ',' << g17(r.w) << ',' << r.mu << ',' << g17(r.lambda)
       << ',' << g17(r.r) << ',' << r.trials_used << ',' << r.degenerate
       << ',' << g17(r.p_zero) << ',' << g17(r.p_zero_se) << ',' << g17(r.mean)
       << ',' << g17(r.variance) << ',' << g17(r.mean_se) << '\n';
  }
}

void write_variance_csv(const std::vector<VarianceRow>& rows,
                        std::ostream& os) {
  os << "n,w,mu,lambda,r,trials,degenerate,mean,variance,ratio,ratio_se,"
        "ratio_defined\n";
  for (const auto& r : rows) {
    os << g17(r.n) << ',' << g17(r.w) << ',' << r.mu << ',' << g17(r.lambda)
       << ',' << g17(r.r) << ',' << r.trials_used << ',' << r.degenerate
       << ',' << g17(r.mean) << ',' << g17(r.variance) << ',';
    if (r.ratio_defined)
      os << g17(r.ratio) << ',' << g17(r.ratio_se) << ",1\n";
    else
      os << ",,0\n";
  }
}

void write_trials_jsonl(const SweepResult& result, std::ostream& os) {
  for (const TrialRecord& rec : result.records) {
    nlohmann::json j;
    j["trial_id"] = rec.trial_id;
    j["seed"] = rec.seed;
    j["point_count"] = rec.point_count;
    j["degenerate"] = rec.degenerate;
    j["wall_seconds"] = rec.wall_seconds;
    if (!rec.degenerate) {
      j["counts"] = rec.counts;
      j["covered"] = rec.covered;
    }
    if (rec.has_chi) j["chi"] = rec.chi;
    if (rec.covered_grid >= 0) j["covered_grid"] = rec.covered_grid != 0;
    os << j.dump() << '\n';
  }
}

}  // namespace kcover
