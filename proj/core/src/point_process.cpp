#include "kcover/point_process.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace kcover {

void Rng::normal_pair(double& z0, double& z1) {
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  z0 = r * std::cos(2.0 * M_PI * u2);
  z1 = r * std::sin(2.0 * M_PI * u2);
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw config_error("negative Poisson mean");
  if (mean == 0.0) return 0;
  return mean < 30.0 ? poisson_inversion(mean) : poisson_ptrd(mean);
}

std::uint64_t Rng::poisson_inversion(double mean) {
  const double u = uniform01();
  std::uint64_t k = 0;
  double p = std::exp(-mean);
  double s = p;
  while (u > s) {
    ++k;
    p *= mean / static_cast<double>(k);
    s += p;
    if (k > 1000000) break;  // unreachable for mean < 30
  }
  return k;
}

// Transformed rejection with decomposition (PTRD), valid from mean 10 up;
// used here from 30. The hat constants are the published ones; acceptance
// tests the exact log-density, so the sampler is unbiased, and every branch
// consumes uniforms in a fixed order, so it is deterministic.
std::uint64_t Rng::poisson_ptrd(double mean) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);

  for (;;) {
    double v = uniform01();
    double u;
    if (v <= 0.86 * v_r) {
      u = v / v_r - 0.43;
      return static_cast<std::uint64_t>(
          std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
    }
    if (v >= v_r) {
      u = uniform01() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0.0 ? -0.5 : 0.5) - u;
      v = uniform01() * v_r;
    }
    const double us = 0.5 - std::fabs(u);
    if (us < 0.013 && v > us) continue;
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    if (kf < 0.0) continue;
    v = v * inv_alpha / (a / (us * us) + b);
    if (std::log(v) <= kf * log_mean - mean - std::lgamma(kf + 1.0))
      return static_cast<std::uint64_t>(kf);
  }
}

PointCloud::PointCloud(int dim, std::vector<double> coords, CloudMeta meta)
    : dim_(dim), coords_(std::move(coords)), meta_(meta) {
  if (dim < 1 || dim > kMaxDim) throw config_error("bad cloud dimension");
  if (coords_.size() % dim_ != 0)
    throw config_error("coordinate array length is not a multiple of dim");
  for (double& v : coords_) v = wrap01(v);
}

TorusPoint PointCloud::at(std::size_t i) const {
  const double* p = point(i);
  return TorusPoint{std::vector<double>(p, p + dim_)};
}

PointCloud sample_poisson(double rate, int dim, SeedSpec seed) {
  if (!(rate >= 0.0)) throw config_error("negative intensity");
  if (dim < 1 || dim > kMaxDim) throw config_error("bad cloud dimension");
  Rng rng(seed.stream());
  const std::uint64_t n = rng.poisson(rate);
  std::vector<double> coords(n * dim);
  for (double& v : coords) v = rng.uniform01();
  return PointCloud(dim, std::move(coords),
                    CloudMeta{dim, rate, seed.master_seed, seed.trial_id});
}

PointCloud sample_fixed(std::size_t count, int dim, SeedSpec seed) {
  if (dim < 1 || dim > kMaxDim) throw config_error("bad cloud dimension");
  Rng rng(seed.stream());
  std::vector<double> coords(count * dim);
  for (double& v : coords) v = rng.uniform01();
  return PointCloud(dim, std::move(coords),
                    CloudMeta{dim, static_cast<double>(count),
                              seed.master_seed, seed.trial_id});
}

void write_cloud_jsonl(const PointCloud& cloud, std::ostream& os) {
  nlohmann::json header;
  header["dim"] = cloud.dim();
  header["n"] = cloud.meta().rate;
  header["seed"] = cloud.meta().seed;
  header["trial_id"] = cloud.meta().trial_id;
  os << header.dump() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* p = cloud.point(i);
    os << '[';
    for (int c = 0; c < cloud.dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[c]);
      if (c) os << ',';
      os << buf;
    }
    os << "]\n";
  }
}

PointCloud read_cloud_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw config_error("empty cloud stream");
  const nlohmann::json header = nlohmann::json::parse(line);
  CloudMeta meta;
  meta.dim = header.at("dim").get<int>();
  meta.rate = header.at("n").get<double>();
  meta.seed = header.at("seed").get<std::uint64_t>();
  meta.trial_id = header.at("trial_id").get<std::uint32_t>();

  std::vector<double> coords;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const nlohmann::json pt = nlohmann::json::parse(line);
    if (!pt.is_array() || static_cast<int>(pt.size()) != meta.dim)
      throw config_error("point line with wrong arity");
    for (const auto& v : pt) coords.push_back(v.get<double>());
  }
  return PointCloud(meta.dim, std::move(coords), meta);
}

void Rng::unit_vector(int d, double* out) {
  if (d == 1) {
    out[0] = (next_u64() & 1ULL) ? 1.0 : -1.0;
    return;
  }
  for (;;) {
    double norm2 = 0.0;
    for (int i = 0; i < d; i += 2) {
      double z0, z1;
      normal_pair(z0, z1);
      out[i] = z0;
      if (i + 1 < d) out[i + 1] = z1;
    }
    for (int i = 0; i < d; ++i) norm2 += out[i] * out[i];
    if (norm2 > 1e-300) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int i = 0; i < d; ++i) out[i] *= inv;
      return;
    }
  }
}

}  // namespace kcover
