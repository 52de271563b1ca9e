#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace kcover {

// Grid of sweep settings. For each n, offset w, and target index mu the
// probe radius solves n * omega_d * r^d = log n + (mu + k - 2) loglog n + w.
struct SweepConfig {
  int d = 2;
  int k = 2;
  std::vector<double> n_values;
  std::vector<double> w_values;
  std::vector<int> mu_targets;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct SweepCell {
  double n = 0.0;
  double w = 0.0;
  int mu = 0;
  double lambda = 0.0;  // ball occupancy at the probe radius
  double r = 0.0;
};

// Everything one trial produced. Aggregates are recomputable from the
// records alone. A degenerate trial keeps only identity fields.
struct TrialRecord {
  std::uint32_t trial_id = 0;
  std::uint64_t seed = 0;  // derived stream seed actually fed to the RNG
  std::size_t point_count = 0;
  std::vector<std::int64_t> counts;  // critical points at or above r, per cell
  std::vector<std::int8_t> covered;  // per cell: 1/0 for mu == d, -1 otherwise
  std::int8_t covered_grid = -1;     // filled only by oracle comparisons
  std::int64_t chi = 0;              // filled only by Euler flows
  bool has_chi = false;
  bool degenerate = false;
  double wall_seconds = 0.0;
};

struct SweepRow {
  double n = 0.0;
  double w = 0.0;
  int mu = 0;
  double lambda = 0.0;
  double r = 0.0;
  std::size_t trials_used = 0;
  std::size_t degenerate = 0;
  double p_zero = 0.0;
  double p_zero_se = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
};

struct VarianceRow {
  double n = 0.0;
  double w = 0.0;
  int mu = 0;
  double lambda = 0.0;
  double r = 0.0;
  std::size_t trials_used = 0;
  std::size_t degenerate = 0;
  double mean = 0.0;
  double variance = 0.0;
  double ratio = 0.0;     // variance / mean; meaningful when ratio_defined
  double ratio_se = 0.0;  // leave-one-out jackknife
  bool ratio_defined = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;      // n-major, then w, then mu
  std::vector<TrialRecord> records;  // trial-id order, all n values
  std::vector<SweepRow> rows;
};

// The cells probed for one n, in (w, mu) order. Validates the config.
std::vector<SweepCell> sweep_cells(const SweepConfig& cfg, double n);

// One enumeration per trial serves every cell: counts at each radius are
// read off the same critical-point list, so comparisons across w share
// their randomness. Degenerate trials are excluded and counted.
// Deterministic given master_seed, regardless of thread count.
SweepResult run_sweep(const SweepConfig& cfg);

// Dispersion table (variance/mean with jackknife errors) from the same
// trials run_sweep would draw. Ratios are skipped below mean 0.05.
std::vector<VarianceRow> run_variance_check(const SweepConfig& cfg);
std::vector<VarianceRow> variance_rows(const SweepResult& result);

// Plot-ready emission; numbers carry 17 significant digits.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void write_variance_csv(const std::vector<VarianceRow>& rows,
                        std::ostream& os);
void write_trials_jsonl(const SweepResult& result, std::ostream& os);

namespace detail {

// Runs body(trial) for every trial on a worker pool. Exceptions are
// captured per trial and the first (by trial id) is rethrown after all
// workers drain, so results never interleave with stack unwinding.
void for_each_trial(std::size_t trials, int threads,
                    const std::function<void(std::size_t)>& body);

}  // namespace detail

}  // namespace kcover
