#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/dp.hpp"
#include "dplab/rng.hpp"

namespace dplab {

/// Strictly increasing evaluation points.
class Grid {
 public:
  explicit Grid(std::vector<double> points);
  /// n points evenly spaced on [lower, upper], endpoints included.
  static Grid uniform(double lower, double upper, std::size_t n);

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] double front() const { return points_.front(); }
  [[nodiscard]] double back() const { return points_.back(); }

 private:
  std::vector<double> points_;
};

enum class PathKind { kScaledDp, kQuantile, kBrownianBridge, kLimitQuantile };

struct ProcessPath {
  Grid grid;
  std::vector<double> values;
  PathKind kind;
};

/// Exact Brownian bridge on the grid points (all inside [0, 1]), generated
/// from the Markov conditionals B(t) | B(s), B(1) = 0.
ProcessPath brownian_bridge_path(const Grid& grid, RngStream& rng);

/// Cov(B(S_i), B(S_j)) = mu(S_i n S_j) - mu(S_i) mu(S_j).
double bb_cov(const BorelSet& si, const BorelSet& sj, const BaseMeasure& mu);

/// sqrt(a) (P(t) - H(t)) at each grid point.
ProcessPath scaled_process_path(const DpSample& sample, const BaseMeasure& base, const Grid& grid);

/// sqrt(a) (P^{-1}(u) - H^{-1}(u)) on a grid of levels inside (0, 1).
ProcessPath quantile_process_path(const DpSample& sample, const BaseMeasure& base,
                                  const Grid& ugrid);

/// Covariance of the limiting quantile process -B(u)/h(H^{-1}(u)):
/// (min(u,v) - uv) / (h(H^{-1}(u)) h(H^{-1}(v))).
double limit_quantile_cov(double u, double v, const BaseMeasure& base);

/// Zero-mean bivariate normal, parameterized by variances and correlation.
class BivariateGaussianSpec {
 public:
  BivariateGaussianSpec(double sigma11, double sigma22, double rho12);
  /// Limit of (D_a(S_1), D_a(S_2)) for disjoint cells with measures l1, l2.
  static BivariateGaussianSpec from_cells(double l1, double l2);

  [[nodiscard]] double sigma11() const { return sigma11_; }
  [[nodiscard]] double sigma22() const { return sigma22_; }
  [[nodiscard]] double rho12() const { return rho12_; }
  [[nodiscard]] double covariance() const { return cov_; }
  [[nodiscard]] double determinant() const { return det_; }
  /// Entries of Sigma^{-1}: (0,0), (0,1) = (1,0), (1,1).
  [[nodiscard]] std::array<double, 3> inverse() const { return inv_; }

 private:
  double sigma11_, sigma22_, rho12_, cov_, det_;
  std::array<double, 3> inv_;
};

/// Exact density of (D_1, D_2) = sqrt(a) (P(S_1) - l1, P(S_2) - l2) for
/// disjoint cells of measures l1, l2; zero off the image of the simplex.
double scaled_bivariate_density(double y1, double y2, double l1, double l2, double a);

double limit_bivariate_density(double y1, double y2, const BivariateGaussianSpec& spec);

/// Axis-aligned integration rectangle.
struct Box {
  double x_lower, x_upper, y_lower, y_upper;
};

/// Tensor Simpson rule refined by doubling until two successive estimates
/// differ by less than `tolerance`.
struct QuadratureSpec {
  std::size_t initial_intervals = 64;
  std::size_t max_intervals = 4096;
  double tolerance = 1e-4;
  /// Half-width of the default box, in limit standard deviations.
  double half_width_sd = 12.0;
};

struct QuadratureResult {
  double value;
  /// Last refinement change; the quadrature error estimate.
  double error;
  std::size_t intervals;
};

using Density2d = std::function<double(double, double)>;

QuadratureResult integrate_2d(const Density2d& f, const Box& box, const QuadratureSpec& quad);

struct TvEstimate {
  double value;
  /// Refinement change plus the mass of either density outside the box.
  double quad_error;
  std::size_t intervals;
};

/// (1/2) int int |f - g| over the box, clamped to [0, 1].
TvEstimate tv_distance_2d(const Density2d& f, const Density2d& g, const Box& box,
                          const QuadratureSpec& quad);

/// The box centred on 0 that tv_distance_bivariate integrates over.
Box limit_box(double l1, double l2, const QuadratureSpec& quad);

/// Total variation distance between the exact scaled density and its Gaussian limit.
TvEstimate tv_distance_bivariate(double l1, double l2, double a, const QuadratureSpec& quad);

}  // namespace dplab
