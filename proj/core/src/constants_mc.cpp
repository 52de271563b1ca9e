#include "kcover/constants_mc.hpp"

#include <array>
#include <cmath>
#include <cstring>

#include "kcover/errors.hpp"
#include "kcover/geometry.hpp"
#include "kcover/rng.hpp"

namespace kcover {
namespace {

// Barycentric coordinates of the origin with respect to the d+1 direction
// vectors; all coordinates strictly positive means the origin is interior.
bool origin_in_open_simplex(const double* theta, int d) {
  const int m = d + 1;
  std::array<double, (kMaxDim + 1) * (kMaxDim + 2)> a{};  // m x (m+1) augmented
  const int stride = m + 1;
  for (int c = 0; c < d; ++c)
    for (int i = 0; i < m; ++i) a[c * stride + i] = theta[i * d + c];
  for (int i = 0; i < m; ++i) a[d * stride + i] = 1.0;
  a[d * stride + m] = 1.0;

  for (int col = 0; col < m; ++col) {
    int pivot = col;
    double best = std::fabs(a[col * stride + col]);
    for (int r = col + 1; r < m; ++r) {
      const double v = std::fabs(a[r * stride + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-14) return false;
    if (pivot != col)
      for (int c = col; c <= m; ++c)
        std::swap(a[col * stride + c], a[pivot * stride + c]);
    const double inv = 1.0 / a[col * stride + col];
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r * stride + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c <= m; ++c) a[r * stride + c] -= f * a[col * stride + c];
    }
  }
  for (int i = 0; i < m; ++i) {
    const double b = a[i * stride + m] / a[i * stride + i];
    if (!(b > kTolBary)) return false;
  }
  return true;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ConstantEstimate estimate_Cd(int d, int k, std::size_t samples, SeedSpec seed) {
  if (d < 1 || d > kMaxDim) throw config_error("constant estimate needs 1 <= d <= 8");
  if (k < 1) throw config_error("constant estimate needs k >= 1");

  ConstantEstimate est;
  est.d = d;
  est.k = k;

  if (d == 1) {
    est.value = 1.0 / factorial(k - 1);
    est.std_error = 0.0;
    est.samples = 0;
    return est;
  }
  if (samples == 0) throw config_error("constant estimate needs samples >= 1");

  const double prefactor =
      std::pow(static_cast<double>(d), d) * unit_ball_volume(d) /
      (static_cast<double>(d + 1) * factorial(k - 1));

  Rng rng(seed.stream());
  const int m = d + 1;
  std::array<double, (kMaxDim + 1) * kMaxDim> theta{};
  std::array<double, (kMaxDim + 1) * kMaxDim> edges{};  // offsets from theta_0
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (int i = 0; i < m; ++i) rng.unit_vector(d, theta.data() + i * d);
    if (!origin_in_open_simplex(theta.data(), d)) continue;
    for (int i = 1; i < m; ++i)
      for (int c = 0; c < d; ++c)
        edges[i * d + c] = theta[i * d + c] - theta[c];
    const double v = detail::simplex_volume_flat(edges.data(), m, d);
    sum += v;
    sum2 += v * v;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double var = std::max(0.0, (sum2 - sum * sum / ns) / (ns - 1.0));
  est.value = prefactor * mean;
  est.std_error = prefactor * std::sqrt(var / ns);
  est.samples = samples;
  return est;
}

}  // namespace kcover
