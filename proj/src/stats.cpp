#include "dplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dplab/errors.hpp"

namespace dplab {
namespace {

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

void require_samples(std::size_t n, std::size_t min) {
  if (n < min) throw InvalidArgument("not enough samples for the estimate");
}

}  // namespace

Estimate mean_estimate(std::span<const double> xs) {
  require_samples(xs.size(), 2);
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate variance_estimate(std::span<const double> xs) {
  require_samples(xs.size(), 2);
  const double m = mean_of(xs);
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - m) * (x - m);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(xs.size());
  const double s2 = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  return {s2, std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

Estimate covariance_estimate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("covariance needs paired samples");
  require_samples(xs.size(), 2);
  const double mx = mean_of(xs), my = mean_of(ys);
  std::vector<double> products(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) products[i] = (xs[i] - mx) * (ys[i] - my);
  const auto p = mean_estimate(products);
  const double n = static_cast<double>(xs.size());
  return {p.value * n / (n - 1.0), p.se};
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges slowly; the value is 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf) {
  require_samples(xs.size(), 1);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys) {
  require_samples(xs.size(), 1);
  require_samples(ys.size(), 1);
  std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return {d, kolmogorov_survival(std::sqrt(n * m / (n + m)) * d)};
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("slope needs >= 2 pairs");
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace dplab
