#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcover/constants_mc.hpp"
#include "kcover/coverage.hpp"
#include "kcover/critical_points.hpp"
#include "kcover/errors.hpp"
#include "kcover/euler.hpp"
#include "kcover/geometry.hpp"
#include "kcover/grid_index.hpp"
#include "kcover/harness.hpp"
#include "kcover/point_process.hpp"
#include "kcover/window_stats.hpp"

namespace {

using nlohmann::json;

constexpr double kDegenerateRateLimit = 1e-3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw kcover::config_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// "x,y;x,y" point list; a bare comma list is a set of points for d = 1 and
// a single point otherwise.
kcover::PointCloud parse_points(const std::string& text, int d) {
  std::vector<std::string> groups;
  std::string group;
  std::istringstream split(text);
  while (std::getline(split, group, ';'))
    if (!group.empty()) groups.push_back(group);
  if (groups.empty()) throw kcover::config_error("empty --points list");

  std::vector<double> coords;
  auto parse_group = [&](const std::string& g, bool one_per_value) {
    std::istringstream gs(g);
    std::string tok;
    while (std::getline(gs, tok, ',')) {
      if (tok.empty()) throw kcover::config_error("empty coordinate in --points");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw kcover::config_error("bad coordinate '" + tok + "'");
      }
      if (used != tok.size())
        throw kcover::config_error("bad coordinate '" + tok + "'");
      coords.push_back(kcover::wrap01(v));
      (void)one_per_value;
    }
  };
  for (const auto& g : groups) parse_group(g, d == 1);
  if (coords.size() % static_cast<std::size_t>(d) != 0)
    throw kcover::config_error("--points length is not a multiple of d");

  kcover::CloudMeta meta;
  meta.dim = d;
  meta.rate = static_cast<double>(coords.size() / d);
  meta.seed = 0;
  meta.trial_id = 0;
  return kcover::PointCloud(d, std::move(coords), meta);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      vals.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw kcover::config_error(std::string("bad value in ") + what);
    }
  }
  if (vals.empty())
    throw kcover::config_error(std::string("empty list for ") + what);
  return vals;
}

const char* covered_name(kcover::Covered c) {
  switch (c) {
    case kcover::Covered::kYes:
      return "yes";
    case kcover::Covered::kNo:
      return "no";
    case kcover::Covered::kInconclusive:
      return "inconclusive";
    case kcover::Covered::kOutOfRegime:
      return "out_of_regime";
  }
  return "unknown";
}

json verdict_json(const kcover::CoverageVerdict& v, double r) {
  json j;
  j["covered"] = covered_name(v.status);
  j["r"] = r;
  if (v.witness) {
    j["witness"] = v.witness->x;
    j["witness_depth"] = v.witness_depth;
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

int exit_for_degenerate_rate(std::size_t degenerate, std::size_t total) {
  if (total == 0) return 0;
  return (static_cast<double>(degenerate) / static_cast<double>(total) >
          kDegenerateRateLimit)
             ? 2
             : 0;
}

kcover::PointCloud cloud_for(const std::string& points, int d, double n,
                             const GlobalOpts& g) {
  if (d < 1 || d > kcover::kMaxDim)
    throw kcover::config_error("--d must be between 1 and 8");
  if (!points.empty()) return parse_points(points, d);
  if (n <= 0.0)
    throw kcover::config_error("provide --points or a positive --n");
  return kcover::sample_poisson(n, d, kcover::SeedSpec{g.seed, 0});
}

int cmd_sample(const GlobalOpts& g, int d, double n, std::size_t fixed,
               std::size_t trials) {
  Sink sink(g.out);
  for (std::size_t t = 0; t < trials; ++t) {
    const kcover::SeedSpec seed{g.seed, static_cast<std::uint32_t>(t)};
    const auto cloud = fixed > 0 ? kcover::sample_fixed(fixed, d, seed)
                                 : kcover::sample_poisson(n, d, seed);
    kcover::write_cloud_jsonl(cloud, sink.stream());
  }
  return 0;
}

int cmd_critical_points(const GlobalOpts& g, const std::string& points, int d,
                        double n, int k, double r_min, double r_max,
                        int mu_min, int mu_max) {
  const auto cloud = cloud_for(points, d, n, g);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), k, d));
  kcover::EnumerationWindow win;
  win.r_min = r_min;
  win.r_max = r_max;
  win.mu_min = mu_min;
  win.mu_max = mu_max;
  const auto crits = kcover::enumerate_critical_points(index, k, win);
  Sink sink(g.out);
  kcover::write_critical_jsonl(crits, sink.stream());
  return 0;
}

int cmd_coverage(const GlobalOpts& g, const std::string& points, int d,
                 double n, int k, double r, double grid_h) {
  const auto cloud = cloud_for(points, d, n, g);
  const kcover::SpatialIndex index(
      cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), k, d));
  json j;
  if (grid_h > 0.0) {
    j = verdict_json(kcover::is_covered_grid(index, k, r, grid_h), r);
    j["decider"] = "grid";
    j["vacancy_components"] =
        kcover::vacancy_components(index, k, r, grid_h);
  } else {
    j = verdict_json(kcover::is_covered_morse(index, k, r), r);
    j["decider"] = "morse";
  }
  Sink sink(g.out);
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const GlobalOpts& g, int d, int k, const std::string& mu_list,
              const std::string& n_list, const std::string& w_list,
              std::size_t trials, const std::string& records_path,
              bool variance) {
  kcover::SweepConfig cfg;
  cfg.d = d;
  cfg.k = k;
  cfg.n_values = parse_list(n_list, "--n");
  cfg.w_values = parse_list(w_list, "--w");
  for (double mu : parse_list(mu_list, "--mu"))
    cfg.mu_targets.push_back(static_cast<int>(mu));
  cfg.trials = trials;
  cfg.master_seed = g.seed;
  cfg.threads = g.threads;

  const auto result = kcover::run_sweep(cfg);
  Sink sink(g.out);
  if (variance) {
    const auto vrows = kcover::variance_rows(result);
    if (g.format == "json") {
      json arr = json::array();
      for (const auto& r : vrows) {
        json j = {{"n", r.n},         {"w", r.w},
                  {"mu", r.mu},       {"lambda", r.lambda},
                  {"r", r.r},         {"trials", r.trials_used},
                  {"degenerate", r.degenerate},
                  {"mean", r.mean},   {"variance", r.variance}};
        if (r.ratio_defined) {
          j["ratio"] = r.ratio;
          j["ratio_se"] = r.ratio_se;
        }
        arr.push_back(j);
      }
      sink.stream() << arr.dump(2) << '\n';
    } else {
      kcover::write_variance_csv(vrows, sink.stream());
    }
  } else if (g.format == "json") {
    json arr = json::array();
    for (const auto& r : result.rows)
      arr.push_back({{"n", r.n},
                     {"w", r.w},
                     {"mu", r.mu},
                     {"lambda", r.lambda},
                     {"r", r.r},
                     {"trials", r.trials_used},
                     {"degenerate", r.degenerate},
                     {"p_zero", r.p_zero},
                     {"p_zero_se", r.p_zero_se},
                     {"mean", r.mean},
                     {"variance", r.variance},
                     {"mean_se", r.mean_se}});
    sink.stream() << arr.dump(2) << '\n';
  } else {
    kcover::write_sweep_csv(result.rows, sink.stream());
  }
  if (!records_path.empty()) {
    std::ofstream rec(records_path, std::ios::binary);
    if (!rec)
      throw kcover::config_error("cannot open records file " + records_path);
    kcover::write_trials_jsonl(result, rec);
  }
  std::size_t degenerate = 0;
  for (const auto& rec : result.records)
    if (rec.degenerate) ++degenerate;
  return exit_for_degenerate_rate(degenerate, result.records.size());
}

int cmd_window(const GlobalOpts& g, int d, int k, double n, double lambda0,
               std::size_t trials, const std::string& coverage_lambda0s) {
  Sink sink(g.out);
  if (!coverage_lambda0s.empty()) {
    const auto l0s = parse_list(coverage_lambda0s, "--coverage-lambda0s");
    const auto rows =
        kcover::coverage_probability_check(n, d, k, l0s, trials, g.seed);
    std::size_t degenerate = 0;
    if (g.format == "json") {
      json arr = json::array();
      for (const auto& r : rows)
        arr.push_back({{"lambda0", r.lambda0},
                       {"trials", r.trials},
                       {"degenerate", r.degenerate},
                       {"covered_frac", r.covered_frac},
                       {"se", r.se},
                       {"predicted_limit", r.predicted_limit},
                       {"predicted_exact", r.predicted_exact}});
      sink.stream() << arr.dump(2) << '\n';
    } else {
      auto& os = sink.stream();
      os << "lambda0,trials,degenerate,covered_frac,se,predicted_limit,"
            "predicted_exact\n";
      char buf[256];
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", r.lambda0,
                      r.trials, r.degenerate, r.covered_frac, r.se,
                      r.predicted_limit, r.predicted_exact);
        os << buf;
      }
    }
    if (!rows.empty()) degenerate = rows.front().degenerate;
    return exit_for_degenerate_rate(degenerate,
                                    rows.empty() ? 0 : trials);
  }

  const auto cfg = kcover::WindowConfig::make(n, d, k, lambda0);
  std::vector<std::vector<kcover::MarkedPoint>> all;
  all.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto cloud = kcover::sample_poisson(
        n, d, kcover::SeedSpec{g.seed, static_cast<std::uint32_t>(t)});
    const kcover::SpatialIndex index(
        cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), k, d));
    all.push_back(kcover::collect_xi(index, cfg));
  }
  const auto rep = kcover::gof_poisson(all, cfg);
  json j = {{"n", n},
            {"d", d},
            {"k", k},
            {"lambda0", lambda0},
            {"trials", rep.trial_count},
            {"mean_count", rep.mean_count},
            {"dispersion", rep.dispersion},
            {"count_histogram", rep.count_histogram},
            {"counts_vs_poisson",
             {{"stat", rep.counts_vs_poisson.stat},
              {"dof", rep.counts_vs_poisson.dof},
              {"p", rep.counts_vs_poisson.p}}},
            {"ks_marks", {{"stat", rep.ks_marks_stat}, {"p", rep.ks_marks_p}}},
            {"ks_exact", {{"stat", rep.ks_exact_stat}, {"p", rep.ks_exact_p}}},
            {"ks_sample_size", rep.ks_sample_size},
            {"truncated_marks", rep.truncated_marks},
            {"spatial_uniformity",
             {{"stat", rep.spatial_uniformity.stat},
              {"dof", rep.spatial_uniformity.dof},
              {"p", rep.spatial_uniformity.p}}},
            {"c_hat_raw", rep.c_hat_raw},
            {"c_hat_debiased", rep.c_hat_debiased}};
  sink.stream() << j.dump(2) << '\n';
  return 0;
}

int cmd_euler(const GlobalOpts& g, int d, int k, double n,
              const std::string& lambda_list, std::size_t trials, bool fit) {
  const auto lambdas = parse_list(lambda_list, "--lambdas");
  const auto rows =
      kcover::expected_euler_curve(n, d, k, lambdas, trials, g.seed);
  Sink sink(g.out);
  if (g.format == "json") {
    json out;
    out["rows"] = json::array();
    for (const auto& r : rows)
      out["rows"].push_back({{"lambda", r.lambda},
                             {"r", r.r},
                             {"mean_chi", r.mean_chi},
                             {"se", r.se},
                             {"trials", r.trials},
                             {"degenerate", r.degenerate}});
    if (fit) {
      const auto f = kcover::fit_euler_form(rows, n, d, k);
      out["fit"] = {{"coef", f.coef},
                    {"se", f.se},
                    {"chi2", f.chi2},
                    {"dof", f.dof}};
    }
    sink.stream() << out.dump(2) << '\n';
  } else {
    auto& os = sink.stream();
    os << "lambda,r,mean_chi,se,trials,degenerate\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%zu,%zu\n",
                    r.lambda, r.r, r.mean_chi, r.se, r.trials, r.degenerate);
      os << buf;
    }
  }
  std::size_t total = 0, degenerate = 0;
  for (const auto& r : rows) {
    total += r.trials + r.degenerate;
    degenerate += r.degenerate;
  }
  return exit_for_degenerate_rate(degenerate, total);
}

int cmd_constants(const GlobalOpts& g, int d, int k, std::size_t samples) {
  const auto est =
      kcover::estimate_Cd(d, k, samples, kcover::SeedSpec{g.seed, 0});
  Sink sink(g.out);
  if (g.format == "csv") {
    auto& os = sink.stream();
    os << "d,k,samples,value,std_error\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%zu,%.17g,%.17g\n", est.d, est.k,
                  est.samples, est.value, est.std_error);
    os << buf;
  } else {
    const json j = {{"d", est.d},
                    {"k", est.k},
                    {"samples", est.samples},
                    {"value", est.value},
                    {"std_error", est.std_error}};
    sink.stream() << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_oracle_compare(const GlobalOpts& g, int d, int k, double n,
                       std::size_t instances, double lambda_lo,
                       double lambda_hi, double grid_scale) {
  // Morse decision vs lattice decision (at spacing r/16), and vacancy
  // components at spacing r/grid_scale vs the count of index-d critical
  // values above r, across a radius band. Components found by the lattice
  // can lag the critical count two ways: a hole too shallow for the lattice
  // to see, and two holes joined through an index-(d-1) value above r. The
  // saddle column reports the second effect.
  Sink sink(g.out);
  auto& os = sink.stream();
  os << "instance,r,morse,grid,agree,vacancy_components,high_critical_count,"
        "saddle_count,match\n";
  std::size_t degenerate = 0, agree = 0, match = 0, decided = 0;
  const double wd = kcover::unit_ball_volume(d);
  for (std::size_t i = 0; i < instances; ++i) {
    const kcover::SeedSpec seed{g.seed, static_cast<std::uint32_t>(i)};
    const auto cloud = kcover::sample_poisson(n, d, seed);
    const kcover::SpatialIndex index(
        cloud, kcover::SpatialIndex::default_cell_size(cloud.size(), k, d));
    const double frac =
        instances > 1 ? static_cast<double>(i) / (instances - 1.0) : 0.5;
    const double lambda =
        std::log(n) + (d + k - 2) * std::log(std::log(n)) + lambda_lo +
        (lambda_hi - lambda_lo) * frac;
    const double r = std::pow(lambda / (n * wd), 1.0 / d);
    try {
      const auto morse = kcover::is_covered_morse(index, k, r);
      const auto grid = kcover::is_covered_grid(index, k, r, r / 16.0);
      const auto comps =
          kcover::vacancy_components(index, k, r, r / grid_scale);
      kcover::EnumerationWindow win;
      win.r_min = r;
      win.mu_min = d > 1 ? d - 1 : d;
      win.mu_max = d;
      const auto high = kcover::enumerate_high_window(index, k, win).crits;
      std::size_t maxima = 0, saddles = 0;
      for (const auto& cp : high) (cp.mu == d ? maxima : saddles) += 1;
      const bool ok_verdict =
          grid.status == kcover::Covered::kInconclusive ||
          morse.status == grid.status;
      const bool ok_count = comps == maxima;
      if (grid.status != kcover::Covered::kInconclusive) ++decided;
      agree += ok_verdict ? 1 : 0;
      match += ok_count ? 1 : 0;
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%s,%s,%d,%zu,%zu,%zu,%d\n",
                    i, r, covered_name(morse.status),
                    covered_name(grid.status), ok_verdict ? 1 : 0, comps,
                    maxima, saddles, ok_count ? 1 : 0);
      os << buf;
    } catch (const kcover::degenerate_error&) {
      ++degenerate;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,degenerate,,,,,,\n", i, r);
      os << buf;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "summary,,,,%zu,%zu,%zu,%zu\n", agree, instances - degenerate,
                match, decided);
  os << buf;
  return exit_for_degenerate_rate(degenerate, instances);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-coverage processes on the flat torus: sampling, critical "
               "points, coverage decisions, and Monte Carlo experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed for all randomness");
  app.add_option("--threads", g.threads, "worker threads for trial loops");
  app.add_option("--out", g.out, "output file (stdout when omitted)");
  app.add_option("--format", g.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  // sample
  auto* sample = app.add_subcommand("sample", "draw point clouds as JSONL");
  int sample_d = 2;
  double sample_n = 1000.0;
  std::size_t sample_fixed = 0, sample_trials = 1;
  sample->add_option("--d", sample_d, "dimension");
  sample->add_option("--n", sample_n, "Poisson rate");
  sample->add_option("--fixed", sample_fixed, "exact count instead of Poisson");
  sample->add_option("--trials", sample_trials, "number of clouds");

  // critical-points
  auto* crit = app.add_subcommand("critical-points",
                                  "enumerate critical points as JSONL");
  std::string crit_points;
  int crit_d = 2, crit_k = 1, crit_mu_min = 0, crit_mu_max = 8;
  double crit_n = 0.0, crit_rmin = 0.0, crit_rmax = 0.25;
  crit->add_option("--points", crit_points, "explicit points x,y;x,y");
  crit->add_option("--d", crit_d, "dimension");
  crit->add_option("--n", crit_n, "Poisson rate when sampling");
  crit->add_option("--k", crit_k, "neighbor order");
  crit->add_option("--r-min", crit_rmin, "exclusive lower radius");
  crit->add_option("--r-max", crit_rmax, "inclusive upper radius");
  crit->add_option("--mu-min", crit_mu_min, "minimum index");
  crit->add_option("--mu-max", crit_mu_max, "maximum index");

  // coverage
  auto* cov = app.add_subcommand("coverage", "decide k-coverage at radius r");
  std::string cov_points;
  int cov_d = 2, cov_k = 1;
  double cov_n = 0.0, cov_r = 0.1, cov_h = 0.0;
  cov->add_option("--points", cov_points, "explicit points x,y;x,y");
  cov->add_option("--d", cov_d, "dimension");
  cov->add_option("--n", cov_n, "Poisson rate when sampling");
  cov->add_option("--k", cov_k, "coverage multiplicity");
  cov->add_option("--r", cov_r, "ball radius");
  cov->add_option("--grid-h", cov_h,
                  "use the lattice decider with this spacing");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "phase-transition sweep over second-order offsets");
  int sweep_d = 2, sweep_k = 2;
  std::string sweep_mu = "2", sweep_n = "50000", sweep_w = "0";
  std::size_t sweep_trials = 100;
  std::string sweep_records;
  bool sweep_variance = false;
  sweep->add_option("--d", sweep_d, "dimension");
  sweep->add_option("--k", sweep_k, "neighbor order");
  sweep->add_option("--mu", sweep_mu, "target indices, comma separated");
  sweep->add_option("--n", sweep_n, "point rates, comma separated");
  sweep->add_option("--w", sweep_w, "occupancy offsets, comma separated");
  sweep->add_option("--trials", sweep_trials, "trials per n");
  sweep->add_option("--records", sweep_records,
                    "also write per-trial records to this JSONL file");
  sweep->add_flag("--variance", sweep_variance,
                  "emit the dispersion table instead of the sweep table");

  // window
  auto* window = app.add_subcommand(
      "window", "marked critical points in the scaling window");
  int win_d = 2, win_k = 2;
  double win_n = 10000.0, win_lambda0 = 0.0;
  std::size_t win_trials = 600;
  std::string win_cov_l0s;
  window->add_option("--d", win_d, "dimension");
  window->add_option("--k", win_k, "neighbor order");
  window->add_option("--n", win_n, "Poisson rate");
  window->add_option("--lambda0", win_lambda0, "window lower edge");
  window->add_option("--trials", win_trials, "trials");
  window->add_option("--coverage-lambda0s", win_cov_l0s,
                     "emit coverage probabilities at these lower edges "
                     "instead of the goodness-of-fit report");

  // euler
  auto* euler = app.add_subcommand("euler", "expected Euler characteristic");
  int eul_d = 2, eul_k = 1;
  double eul_n = 2000.0;
  std::string eul_lambdas = "1,2,3,4,5";
  std::size_t eul_trials = 100;
  bool eul_fit = false;
  euler->add_option("--d", eul_d, "dimension");
  euler->add_option("--k", eul_k, "neighbor order");
  euler->add_option("--n", eul_n, "Poisson rate");
  euler->add_option("--lambdas", eul_lambdas, "occupancy grid");
  euler->add_option("--trials", eul_trials, "trials per grid point");
  euler->add_flag("--fit", eul_fit, "also fit the polynomial form (json)");

  // constants
  auto* consts = app.add_subcommand(
      "constants", "Monte Carlo first-moment constant estimate");
  int con_d = 2, con_k = 2;
  std::size_t con_samples = 1000000;
  consts->add_option("--d", con_d, "dimension");
  consts->add_option("--k", con_k, "neighbor order");
  consts->add_option("--samples", con_samples, "Monte Carlo samples");

  // oracle-compare
  auto* oracle = app.add_subcommand(
      "oracle-compare", "Morse vs lattice coverage decisions");
  int ora_d = 2, ora_k = 2;
  double ora_n = 20000.0, ora_lo = -2.0, ora_hi = 2.0, ora_scale = 16.0;
  std::size_t ora_instances = 50;
  oracle->add_option("--d", ora_d, "dimension");
  oracle->add_option("--k", ora_k, "neighbor order");
  oracle->add_option("--n", ora_n, "Poisson rate");
  oracle->add_option("--instances", ora_instances, "instances");
  oracle->add_option("--lambda-lo", ora_lo, "offset band lower edge");
  oracle->add_option("--lambda-hi", ora_hi, "offset band upper edge");
  oracle->add_option("--grid-scale", ora_scale,
                     "lattice spacing as r divided by this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample)
      return cmd_sample(g, sample_d, sample_n, sample_fixed, sample_trials);
    if (*crit)
      return cmd_critical_points(g, crit_points, crit_d, crit_n, crit_k,
                                 crit_rmin, crit_rmax, crit_mu_min,
                                 crit_mu_max);
    if (*cov) return cmd_coverage(g, cov_points, cov_d, cov_n, cov_k, cov_r,
                                  cov_h);
    if (*sweep)
      return cmd_sweep(g, sweep_d, sweep_k, sweep_mu, sweep_n, sweep_w,
                       sweep_trials, sweep_records, sweep_variance);
    if (*window)
      return cmd_window(g, win_d, win_k, win_n, win_lambda0, win_trials,
                        win_cov_l0s);
    if (*euler)
      return cmd_euler(g, eul_d, eul_k, eul_n, eul_lambdas, eul_trials,
                       eul_fit);
    if (*consts) return cmd_constants(g, con_d, con_k, con_samples);
    if (*oracle)
      return cmd_oracle_compare(g, ora_d, ora_k, ora_n, ora_instances, ora_lo,
                                ora_hi, ora_scale);
  } catch (const kcover::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const kcover::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
