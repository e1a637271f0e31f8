#include "dplab/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dplab/errors.hpp"

namespace dplab {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("grid must not be empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw InvalidArgument("grid points must be finite");
    if (i > 0 && !(points_[i - 1] < points_[i])) {
      throw InvalidArgument("grid points must be strictly increasing");
    }
  }
}

Grid Grid::uniform(double lower, double upper, std::size_t n) {
  if (n < 2 || !(lower < upper)) throw InvalidArgument("uniform grid needs n >= 2 and lower < upper");
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  pts.back() = upper;
  return Grid(std::move(pts));
}

ProcessPath brownian_bridge_path(const Grid& grid, RngStream& rng) {
  if (grid.front() < 0.0 || grid.back() > 1.0) {
    throw InvalidArgument("Brownian bridge grid must lie inside [0,1]");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  double s = 0.0, b = 0.0;
  for (double t : grid.points()) {
    if (t == 0.0 || t == 1.0) {
      values.push_back(0.0);
    } else {
      // B(t) | B(s) = b, B(1) = 0 is normal with these moments.
      const double mean = b * (1.0 - t) / (1.0 - s);
      const double var = (t - s) * (1.0 - t) / (1.0 - s);
      b = mean + std::sqrt(var) * rng.normal();
      values.push_back(b);
    }
    s = t;
  }
  return {grid, std::move(values), PathKind::kBrownianBridge};
}

double bb_cov(const BorelSet& si, const BorelSet& sj, const BaseMeasure& mu) {
  return mu.measure(si.intersect(sj)) - mu.measure(si) * mu.measure(sj);
}

ProcessPath scaled_process_path(const DpSample& sample, const BaseMeasure& base, const Grid& grid) {
  const double scale = std::sqrt(sample.concentration());
  std::vector<double> values;
  values.reserve(grid.size());
  for (double t : grid.points()) values.push_back(scale * (dp_cdf(sample, t) - base.cdf(t)));
  return {grid, std::move(values), PathKind::kScaledDp};
}

ProcessPath quantile_process_path(const DpSample& sample, const BaseMeasure& base,
                                  const Grid& ugrid) {
  if (!(ugrid.front() > 0.0 && ugrid.back() < 1.0)) {
    throw InvalidArgument("quantile grid must lie inside (0,1)");
  }
  const double scale = std::sqrt(sample.concentration());
  std::vector<double> values;
  values.reserve(ugrid.size());
  for (double u : ugrid.points()) {
    values.push_back(scale * (dp_quantile(sample, u) - base.quantile(u)));
  }
  return {ugrid, std::move(values), PathKind::kQuantile};
}

double limit_quantile_cov(double u, double v, const BaseMeasure& base) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) {
    throw InvalidArgument("quantile levels must lie in (0,1)");
  }
  const double hu = base.density(base.quantile(u));
  const double hv = base.density(base.quantile(v));
  if (!(hu > 0.0) || !(hv > 0.0)) {
    throw SingularDensity("base density vanishes at a requested quantile of " + base.label());
  }
  return (std::min(u, v) - u * v) / (hu * hv);
}

BivariateGaussianSpec::BivariateGaussianSpec(double sigma11, double sigma22, double rho12)
    : sigma11_(sigma11), sigma22_(sigma22), rho12_(rho12) {
  if (!(sigma11 > 0.0 && sigma22 > 0.0 && rho12 > -1.0 && rho12 < 1.0)) {
    throw InvalidParameter("covariance must be positive definite");
  }
  cov_ = rho12 * std::sqrt(sigma11 * sigma22);
  det_ = sigma11 * sigma22 * (1.0 - rho12 * rho12);
  inv_ = {sigma22 / det_, -cov_ / det_, sigma11 / det_};
}

BivariateGaussianSpec BivariateGaussianSpec::from_cells(double l1, double l2) {
  if (!(l1 > 0.0 && l2 > 0.0 && l1 + l2 < 1.0)) {
    throw InvalidParameter("cell measures need l1, l2 > 0 and l1 + l2 < 1");
  }
  return BivariateGaussianSpec(l1 * (1.0 - l1), l2 * (1.0 - l2),
                               -std::sqrt(l1 * l2 / ((1.0 - l1) * (1.0 - l2))));
}

double scaled_bivariate_density(double y1, double y2, double l1, double l2, double a) {
  if (!(l1 > 0.0 && l2 > 0.0 && l1 + l2 < 1.0 && a > 0.0)) {
    throw InvalidParameter("need l1, l2 > 0, l1 + l2 < 1, a > 0");
  }
  const double l3 = 1.0 - l1 - l2;
  const double root_a = std::sqrt(a);
  const double x1 = l1 + y1 / root_a;
  const double x2 = l2 + y2 / root_a;
  const double x3 = l3 - (y1 + y2) / root_a;
  if (!(x1 > 0.0 && x2 > 0.0 && x3 > 0.0 && x1 < 1.0 && x2 < 1.0 && x3 < 1.0)) return 0.0;
  const double log_f = std::lgamma(a) - std::log(a) - std::lgamma(a * l1) - std::lgamma(a * l2) -
                       std::lgamma(a * l3) + (a * l1 - 1.0) * std::log(x1) +
                       (a * l2 - 1.0) * std::log(x2) + (a * l3 - 1.0) * std::log(x3);
  return std::exp(log_f);
}

double limit_bivariate_density(double y1, double y2, const BivariateGaussianSpec& spec) {
  const auto inv = spec.inverse();
  const double q = inv[0] * y1 * y1 + 2.0 * inv[1] * y1 * y2 + inv[2] * y2 * y2;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(spec.determinant()));
}

namespace {

struct SimpsonSums {
  double abs_diff = 0.0;
  double f = 0.0;
  double g = 0.0;
};

// Composite Simpson on an n x n tensor grid (n even).
SimpsonSums simpson_2d(const Density2d& f, const Density2d* g, const Box& box, std::size_t n) {
  const double hx = (box.x_upper - box.x_lower) / static_cast<double>(n);
  const double hy = (box.y_upper - box.y_lower) / static_cast<double>(n);
  auto weight = [n](std::size_t i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  SimpsonSums sums;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = box.x_lower + hx * static_cast<double>(i);
    const double wx = weight(i);
    for (std::size_t j = 0; j <= n; ++j) {
      const double y = box.y_lower + hy * static_cast<double>(j);
      const double w = wx * weight(j);
      const double fv = f(x, y);
      sums.f += w * fv;
      if (g) {
        const double gv = (*g)(x, y);
        sums.g += w * gv;
        sums.abs_diff += w * std::abs(fv - gv);
      }
    }
  }
  const double scale = hx * hy / 9.0;
  sums.abs_diff *= scale;
  sums.f *= scale;
  sums.g *= scale;
  return sums;
}

void require_quadrature(const Box& box, const QuadratureSpec& quad) {
  if (!(box.x_lower < box.x_upper && box.y_lower < box.y_upper)) {
    throw InvalidArgument("integration box is empty");
  }
  if (quad.initial_intervals < 2 || quad.initial_intervals % 2 != 0 ||
      quad.max_intervals < quad.initial_intervals || !(quad.tolerance > 0.0)) {
    throw InvalidArgument("quadrature needs an even initial resolution and a positive tolerance");
  }
}

}  // namespace

QuadratureResult integrate_2d(const Density2d& f, const Box& box, const QuadratureSpec& quad) {
  require_quadrature(box, quad);
  std::size_t n = quad.initial_intervals;
  double prev = simpson_2d(f, nullptr, box, n).f;
  double change = std::numeric_limits<double>::infinity();
  while (n * 2 <= quad.max_intervals) {
    n *= 2;
    const double next = simpson_2d(f, nullptr, box, n).f;
    change = std::abs(next - prev);
    prev = next;
    if (change < quad.tolerance) break;
  }
  return {prev, change, n};
}

TvEstimate tv_distance_2d(const Density2d& f, const Density2d& g, const Box& box,
                          const QuadratureSpec& quad) {
  require_quadrature(box, quad);
  std::size_t n = quad.initial_intervals;
  SimpsonSums prev = simpson_2d(f, &g, box, n);
  double change = std::numeric_limits<double>::infinity();
  while (n * 2 <= quad.max_intervals) {
    n *= 2;
    const SimpsonSums next = simpson_2d(f, &g, box, n);
    change = 0.5 * std::abs(next.abs_diff - prev.abs_diff);
    prev = next;
    if (change < quad.tolerance) break;
  }
  const double tail = 0.5 * (std::abs(1.0 - prev.f) + std::abs(1.0 - prev.g));
  const double tv = std::clamp(0.5 * prev.abs_diff, 0.0, 1.0);
  return {tv, change + tail, n};
}

Box limit_box(double l1, double l2, const QuadratureSpec& quad) {
  const auto spec = BivariateGaussianSpec::from_cells(l1, l2);
  const double half = quad.half_width_sd * std::sqrt(std::max(spec.sigma11(), spec.sigma22()));
  return {-half, half, -half, half};
}

TvEstimate tv_distance_bivariate(double l1, double l2, double a, const QuadratureSpec& quad) {
  const auto spec = BivariateGaussianSpec::from_cells(l1, l2);
  return tv_distance_2d(
      [=](double y1, double y2) { return scaled_bivariate_density(y1, y2, l1, l2, a); },
      [&spec](double y1, double y2) { return limit_bivariate_density(y1, y2, spec); },
      limit_box(l1, l2, quad), quad);
}

}  // namespace dplab
