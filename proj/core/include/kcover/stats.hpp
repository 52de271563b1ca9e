#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kcover::stats {

// Upper incomplete gamma, unnormalized: integral over (x, inf) of
// t^(s-1) e^(-t) dt.
double gamma_upper(double s, double x);

// Regularized upper incomplete gamma Q(s, x) = gamma_upper / Gamma(s).
double gamma_upper_reg(double s, double x);

// Survival function of the chi-squared distribution.
double chi2_sf(double x, double dof);

// One-sample Kolmogorov-Smirnov. Callers transform their sample through the
// null CDF first, so the statistic is computed against the uniform law.
// Values are clamped into [0,1]; the input need not be sorted.
double ks_statistic(std::vector<double> pit_values);

// Asymptotic two-sided KS p-value with the small-sample size correction
// lambda = D (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_pvalue(double d_stat, std::size_t n);

struct Chi2Result {
  double stat = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

// Pearson chi-squared goodness of fit. `expected_probs` must sum to ~1; the
// expected count of bin j is total * expected_probs[j]. `estimated_params`
// lowers the degrees of freedom below bins - 1.
Chi2Result chi2_gof(std::span<const std::int64_t> observed,
                    std::span<const double> expected_probs,
                    int estimated_params);

struct WlsFit {
  std::vector<double> coef;
  std::vector<double> se;    // sqrt of the diagonal of (X^T W X)^-1
  double chi2 = 0.0;         // weighted residual sum of squares
  std::size_t dof = 0;       // rows - coefficients
};

// Weighted least squares: design rows x_i (all the same length p), responses
// y_i, weights w_i = 1 / var(y_i). Solves the p x p normal equations with
// partial pivoting. Requires rows >= p and a nonsingular system.
WlsFit wls(const std::vector<std::vector<double>>& design,
           std::span<const double> y, std::span<const double> w);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n-1 denominator)
  std::size_t count = 0;
};

Moments moments(std::span<const double> xs);

}  // namespace kcover::stats
