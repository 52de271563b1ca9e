#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kcover/geometry.hpp"
#include "kcover/rng.hpp"

namespace kcover {

// Names one reproducible random stream: a master seed plus a trial index.
// Every trial of every experiment draws from its own stream, so trials can be
// executed in any order or in parallel without changing the results.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint32_t trial_id = 0;

  // Frozen derivation of the per-trial stream seed.
  std::uint64_t stream() const {
    std::uint64_t z = master_seed +
                      0x9E3779B97F4A7C15ULL *
                          (static_cast<std::uint64_t>(trial_id) + 1);
    return splitmix64(splitmix64(z) ^ 0xD1B54A32D192ED03ULL);
  }
};

struct CloudMeta {
  int dim = 0;
  double rate = 0.0;  // Poisson intensity (or the fixed count when exact)
  std::uint64_t seed = 0;
  std::uint32_t trial_id = 0;
};

// Immutable set of points on the unit torus, stored as a flat row-major
// coordinate array. Coordinates are canonicalized to [0,1) on construction.
class PointCloud {
 public:
  PointCloud(int dim, std::vector<double> coords, CloudMeta meta);

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_; }
  const double* point(std::size_t i) const { return coords_.data() + i * dim_; }
  const std::vector<double>& coords() const { return coords_; }
  const CloudMeta& meta() const { return meta_; }

  TorusPoint at(std::size_t i) const;

 private:
  int dim_;
  std::vector<double> coords_;
  CloudMeta meta_;
};

// Homogeneous Poisson sample on [0,1)^dim with intensity `rate`: the point
// count is Poisson(rate), then that many uniform points are drawn in order.
PointCloud sample_poisson(double rate, int dim, SeedSpec seed);

// Exactly `count` uniform points (binomial process).
PointCloud sample_fixed(std::size_t count, int dim, SeedSpec seed);

// Line-oriented serialization: a header object followed by one point per
// line, every coordinate printed with 17 significant digits.
void write_cloud_jsonl(const PointCloud& cloud, std::ostream& os);
PointCloud read_cloud_jsonl(std::istream& is);

}  // namespace kcover
