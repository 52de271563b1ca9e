#pragma once

#include <cstdint>
#include <random>

namespace kcover {

// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. The engine is std::mt19937_64 (fully specified
// by the standard) and every variate below is produced by explicit bit
// manipulation or an explicitly coded algorithm, never by std::*_distribution,
// so identical seeds give identical streams on every platform. The seeding
// and sampling recipes are frozen; changing them silently breaks every
// recorded trial.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_seed) : eng_(stream_seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; consumes exactly two uniforms per pair.
  void normal_pair(double& z0, double& z1);

  // Poisson count: multiplicative inversion for mean < 30, transformed
  // rejection (PTRD) otherwise. Both branches are deterministic.
  std::uint64_t poisson(double mean);

  // Uniform direction on the unit sphere S^{d-1}; for d == 1 a random sign.
  void unit_vector(int d, double* out);

 private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrd(double mean);

  std::mt19937_64 eng_;
};

}  // namespace kcover
