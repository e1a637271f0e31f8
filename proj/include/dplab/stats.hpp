#pragma once

#include <functional>
#include <span>

namespace dplab {

/// A Monte Carlo point estimate and its standard error.
struct Estimate {
  double value;
  double se;
};

/// Sample mean, SE = sd / sqrt(n).
Estimate mean_estimate(std::span<const double> xs);
/// Unbiased sample variance; delta-method SE sqrt((m4 - s^4) / n).
Estimate variance_estimate(std::span<const double> xs);
/// Unbiased sample covariance; SE from the spread of centred products.
Estimate covariance_estimate(std::span<const double> xs, std::span<const double> ys);

/// Kolmogorov survival function P(K > x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

struct KsResult {
  double statistic;
  double p_value;  // asymptotic Kolmogorov distribution
};

/// One-sample KS test of `xs` against a continuous CDF.
KsResult ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf);
/// Two-sample KS test.
KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys);

double standard_normal_cdf(double z);

/// Least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace dplab
