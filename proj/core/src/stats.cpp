#include "kcover/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "kcover/errors.hpp"

namespace kcover::stats {

double gamma_upper(double s, double x) {
  if (!(s > 0.0) || x < 0.0) throw config_error("gamma_upper needs s > 0, x >= 0");
  if (x == 0.0) return std::tgamma(s);
  return boost::math::tgamma(s, x);
}

double gamma_upper_reg(double s, double x) {
  if (!(s > 0.0) || x < 0.0) throw config_error("gamma_upper_reg needs s > 0, x >= 0");
  return boost::math::gamma_q(s, x);
}

double chi2_sf(double x, double dof) {
  if (!(dof > 0.0) || x < 0.0) throw config_error("chi2_sf needs dof > 0, x >= 0");
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double ks_statistic(std::vector<double> pit_values) {
  if (pit_values.empty()) throw config_error("ks_statistic needs a nonempty sample");
  for (double& u : pit_values) u = std::clamp(u, 0.0, 1.0);
  std::sort(pit_values.begin(), pit_values.end());
  const double n = static_cast<double>(pit_values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < pit_values.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(pit_values[i] - lo, hi - pit_values[i]));
  }
  return d;
}

double ks_pvalue(double d_stat, std::size_t n) {
  if (n == 0) throw config_error("ks_pvalue needs n > 0");
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = d_stat * (rn + 0.12 + 0.11 / rn);
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

Chi2Result chi2_gof(std::span<const std::int64_t> observed,
                    std::span<const double> expected_probs,
                    int estimated_params) {
  if (observed.size() != expected_probs.size() || observed.size() < 2)
    throw config_error("chi2_gof needs matching bins, at least 2");
  std::int64_t total = 0;
  for (const std::int64_t o : observed) total += o;
  if (total <= 0) throw config_error("chi2_gof needs a nonempty sample");

  Chi2Result res;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double exp_count = static_cast<double>(total) * expected_probs[j];
    if (!(exp_count > 0.0))
      throw config_error("chi2_gof expected count must be positive");
    const double diff = static_cast<double>(observed[j]) - exp_count;
    res.stat += diff * diff / exp_count;
  }
  res.dof = static_cast<double>(observed.size()) - 1.0 - estimated_params;
  if (!(res.dof > 0.0)) throw config_error("chi2_gof has no degrees of freedom");
  res.p = chi2_sf(res.stat, res.dof);
  return res;
}

WlsFit wls(const std::vector<std::vector<double>>& design,
           std::span<const double> y, std::span<const double> w) {
  const std::size_t rows = design.size();
  if (rows == 0 || y.size() != rows || w.size() != rows)
    throw config_error("wls needs matching design, responses, and weights");
  const std::size_t p = design[0].size();
  if (p == 0 || rows < p) throw config_error("wls needs rows >= coefficients");

  // Normal equations A b = c with A = X^T W X, c = X^T W y.
  std::vector<double> a(p * p, 0.0), c(p, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& x = design[i];
    if (x.size() != p) throw config_error("wls design rows must have equal length");
    if (!(w[i] >= 0.0)) throw config_error("wls weights must be nonnegative");
    for (std::size_t r = 0; r < p; ++r) {
      c[r] += w[i] * x[r] * y[i];
      for (std::size_t s = 0; s <= r; ++s) a[r * p + s] += w[i] * x[r] * x[s];
    }
  }
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t s = r + 1; s < p; ++s) a[r * p + s] = a[s * p + r];

  // Invert A by Gauss-Jordan with partial pivoting; the inverse doubles as
  // the coefficient covariance.
  std::vector<double> inv(p * p, 0.0);
  for (std::size_t r = 0; r < p; ++r) inv[r * p + r] = 1.0;
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(a[r * p + col]) > std::abs(a[piv * p + col])) piv = r;
    if (a[piv * p + col] == 0.0) throw config_error("wls normal equations singular");
    if (piv != col)
      for (std::size_t s = 0; s < p; ++s) {
        std::swap(a[piv * p + s], a[col * p + s]);
        std::swap(inv[piv * p + s], inv[col * p + s]);
      }
    const double scale = 1.0 / a[col * p + col];
    for (std::size_t s = 0; s < p; ++s) {
      a[col * p + s] *= scale;
      inv[col * p + s] *= scale;
    }
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r * p + col];
      if (f == 0.0) continue;
      for (std::size_t s = 0; s < p; ++s) {
        a[r * p + s] -= f * a[col * p + s];
        inv[r * p + s] -= f * inv[col * p + s];
      }
    }
  }

  WlsFit fit;
  fit.coef.assign(p, 0.0);
  fit.se.assign(p, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t s = 0; s < p; ++s) fit.coef[r] += inv[r * p + s] * c[s];
  }
  for (std::size_t r = 0; r < p; ++r)
    fit.se[r] = std::sqrt(std::max(0.0, inv[r * p + r]));
  for (std::size_t i = 0; i < rows; ++i) {
    double pred = 0.0;
    for (std::size_t r = 0; r < p; ++r) pred += design[i][r] * fit.coef[r];
    const double resid = y[i] - pred;
    fit.chi2 += w[i] * resid * resid;
  }
  fit.dof = rows - p;
  return fit;
}

Moments moments(std::span<const double> xs) {
  Moments m;
  m.count = xs.size();
  if (m.count == 0) return m;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.count);
  if (m.count > 1) {
    double ss = 0.0;
    for (const double x : xs) {
      const double dxm = x - m.mean;
      ss += dxm * dxm;
    }
    m.variance = ss / static_cast<double>(m.count - 1);
  }
  return m;
}

}  // namespace kcover::stats
