#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/dp.hpp"
#include "dplab/errors.hpp"
#include "dplab/limit.hpp"
#include "dplab/parallel.hpp"
#include "dplab/rng.hpp"
#include "dplab/stats.hpp"
#include "dplab/variates.hpp"

namespace dplab {
namespace {

const double kLimitAtOrigin = std::sqrt(27.0) / (2.0 * std::numbers::pi);

TEST(Grid, Validation) {
  EXPECT_THROW(Grid({0.1, 0.1}), InvalidArgument);
  EXPECT_THROW(Grid({0.5, 0.2}), InvalidArgument);
  EXPECT_THROW(Grid({}), InvalidArgument);
  const auto g = Grid::uniform(0.0, 1.0, 5);
  EXPECT_EQ(std::vector<double>(g.points().begin(), g.points().end()),
            (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
}

TEST(BrownianBridge, PinnedAtEndpoints) {
  const auto g = Grid::uniform(0.0, 1.0, 21);
  for (std::uint64_t r = 0; r < 100; ++r) {
    RngStream rng(1, r);
    const auto path = brownian_bridge_path(g, rng);
    ASSERT_EQ(path.values.size(), g.size());
    EXPECT_EQ(path.kind, PathKind::kBrownianBridge);
    EXPECT_EQ(path.values.front(), 0.0);
    EXPECT_EQ(path.values.back(), 0.0);
  }
  RngStream rng(1, 0);
  EXPECT_THROW(brownian_bridge_path(Grid({-0.1, 0.5}), rng), InvalidArgument);
}

TEST(BrownianBridge, CovarianceOnNinePointGrid) {
  const auto g = Grid::uniform(0.1, 0.9, 9);
  const std::size_t reps = 100000;
  std::vector<std::vector<double>> cols(9, std::vector<double>(reps));
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(2, r);
    const auto path = brownian_bridge_path(g, rng);
    for (std::size_t i = 0; i < 9; ++i) cols[i][r] = path.values[i];
  }
  const auto pts = g.points();
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = i; j < 9; ++j) {
      const auto c = covariance_estimate(cols[i], cols[j]);
      const double target = std::min(pts[i], pts[j]) - pts[i] * pts[j];
      EXPECT_LE(std::abs(c.value - target), 4.0 * c.se) << pts[i] << "," << pts[j];
    }
  }
}

TEST(BrownianBridge, MidpointVarianceAndQuartileCovariance) {
  const Grid g({0.25, 0.5, 0.75});
  const std::size_t reps = 100000;
  std::vector<double> q1(reps), mid(reps), q3(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(3, r);
    const auto path = brownian_bridge_path(g, rng);
    q1[r] = path.values[0];
    mid[r] = path.values[1];
    q3[r] = path.values[2];
  }
  const auto v = variance_estimate(mid);
  EXPECT_LE(std::abs(v.value - 0.25), 3.0 * v.se);
  const auto c = covariance_estimate(q1, q3);
  EXPECT_LE(std::abs(c.value - 0.0625), 3.0 * c.se);
}

TEST(BridgeCovariance, Examples) {
  const auto mu = BaseMeasure::uniform();
  EXPECT_NEAR(bb_cov(BorelSet::interval(0.0, 0.3), BorelSet::interval(0.0, 0.3), mu), 0.21, 1e-15);
  EXPECT_NEAR(bb_cov(BorelSet::interval(0.0, 0.2), BorelSet::interval(0.5, 0.6), mu), -0.02, 1e-15);
  EXPECT_NEAR(bb_cov(BorelSet::real_line(), BorelSet({{0.1, 0.2}, {0.4, 0.45}}), mu), 0.0, 1e-15);
}

TEST(ScaledProcess, Examples) {
  const auto h = BaseMeasure::uniform();
  const DpSample matches({0.25, 0.5, 0.75, 1.0}, {0.25, 0.25, 0.25, 0.25}, 0.0, 9.0);
  const Grid g({0.25, 0.5, 0.75, 1.0});
  const auto zero = scaled_process_path(matches, h, g);
  EXPECT_EQ(zero.kind, PathKind::kScaledDp);
  for (double v : zero.values) EXPECT_NEAR(v, 0.0, 1e-15);

  const DpSample s({0.3, 0.8}, {0.6, 0.4}, 0.0, 4.0);
  EXPECT_NEAR(scaled_process_path(s, h, Grid({0.5})).values[0], 0.2, 1e-14);
}

TEST(ScaledProcess, MidpointVarianceIsExactBetaVariance) {
  const auto h = BaseMeasure::uniform();
  const double a = 100.0;
  std::vector<double> xs(10000);
  for (std::size_t r = 0; r < xs.size(); ++r) {
    RngStream rng(4, r);
    xs[r] = scaled_process_path(stick_breaking_sample(a, h, {}, rng), h, Grid({0.5})).values[0];
  }
  const auto v = variance_estimate(xs);
  EXPECT_LE(std::abs(v.value - a / (1.0 + a) * 0.25), 4.0 * v.se);
}

TEST(QuantileProcess, Examples) {
  const auto h = BaseMeasure::uniform();
  const DpSample matches({0.25, 0.5, 0.75, 1.0}, {0.25, 0.25, 0.25, 0.25}, 0.0, 9.0);
  const auto zero = quantile_process_path(matches, h, Grid({0.25, 0.5, 0.75}));
  EXPECT_EQ(zero.kind, PathKind::kQuantile);
  for (double v : zero.values) EXPECT_NEAR(v, 0.0, 1e-15);
  EXPECT_THROW(quantile_process_path(matches, h, Grid({0.0, 0.5})), InvalidArgument);
  EXPECT_THROW(quantile_process_path(matches, h, Grid({0.5, 1.0})), InvalidArgument);
}

// P_a^{-1} = H^{-1}(U_a^{-1}) for DP(a, U[0,1]) pushed through H^{-1}.
TEST(QuantileProcess, PushforwardOfUniformBase) {
  const auto uniform = BaseMeasure::uniform();
  const auto expo = BaseMeasure::exponential();
  const Grid ugrid({0.1, 0.25, 0.5, 0.75, 0.9});
  for (std::uint64_t r = 0; r < 20; ++r) {
    RngStream rng(7, r);
    const auto s = stick_breaking_sample(100.0, uniform, {}, rng);
    std::vector<double> atoms(s.atoms().begin(), s.atoms().end());
    for (auto& x : atoms) x = expo.quantile(x);
    const DpSample mapped(std::move(atoms), std::vector<double>(s.weights().begin(), s.weights().end()),
                          s.truncation_remainder(), 100.0);
    const auto path = quantile_process_path(mapped, expo, ugrid);
    for (std::size_t i = 0; i < ugrid.size(); ++i) {
      const double u = ugrid.points()[i];
      EXPECT_NEAR(path.values[i], 10.0 * (expo.quantile(dp_quantile(s, u)) - expo.quantile(u)), 1e-12);
    }
  }
}

TEST(QuantileProcess, MedianVarianceMatchesLimit) {
  const auto uniform = BaseMeasure::uniform();
  const auto expo = BaseMeasure::exponential();
  const double a = 1e4;
  const std::size_t reps = 10000;
  std::vector<double> um(reps), em(reps);
  parallel_for(reps, [&](std::size_t r) {
    RngStream rng(5, r);
    const auto s = stick_breaking_sample(a, uniform, {}, rng);
    um[r] = quantile_process_path(s, uniform, Grid({0.5})).values[0];
    em[r] = std::sqrt(a) * (expo.quantile(dp_quantile(s, 0.5)) - expo.quantile(0.5));
  });
  const auto vu = variance_estimate(um);
  EXPECT_LE(std::abs(vu.value - 0.25), 4.0 * vu.se) << vu.value;
  const auto ve = variance_estimate(em);
  EXPECT_LE(std::abs(ve.value - 1.0), 4.0 * ve.se) << ve.value;
}

TEST(LimitQuantileCov, Examples) {
  const auto u = BaseMeasure::uniform();
  EXPECT_NEAR(limit_quantile_cov(0.5, 0.5, u), 0.25, 1e-15);
  EXPECT_NEAR(limit_quantile_cov(0.25, 0.75, u), 0.0625, 1e-15);
  EXPECT_NEAR(limit_quantile_cov(0.5, 0.5, BaseMeasure::exponential()), 1.0, 1e-12);
  EXPECT_THROW(limit_quantile_cov(0.0, 0.5, u), InvalidArgument);
}

TEST(LimitQuantileCov, SingularDensity) {
  // A very wide normal: the density underflows to zero in the far tail.
  EXPECT_THROW(limit_quantile_cov(1e-300, 0.5, BaseMeasure::normal(0.0, 1e300)), SingularDensity);
}

// Property: symmetric and positive semidefinite on random u-grids.
TEST(LimitQuantileCov, SymmetricPositiveSemidefinite) {
  RngStream gen(6, 0);
  const std::vector<BaseMeasure> bases{BaseMeasure::uniform(), BaseMeasure::exponential(2.0),
                                       BaseMeasure::normal(0.0, 3.0)};
  for (int trial = 0; trial < 30; ++trial) {
    const auto& h = bases[static_cast<std::size_t>(trial) % bases.size()];
    const int n = 2 + static_cast<int>(gen.uniform() * 15);
    std::vector<double> us(static_cast<std::size_t>(n));
    for (auto& u : us) u = 0.01 + 0.98 * gen.uniform();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m(i, j) = limit_quantile_cov(us[static_cast<std::size_t>(i)], us[static_cast<std::size_t>(j)], h);
      }
    }
    ASSERT_TRUE(m.isApprox(m.transpose(), 0.0));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9) << "trial " << trial;
  }
}

TEST(BivariateGaussian, FromCells) {
  const auto spec = BivariateGaussianSpec::from_cells(1.0 / 3.0, 1.0 / 3.0);
  EXPECT_NEAR(spec.sigma11(), 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(spec.sigma22(), 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(spec.covariance(), -1.0 / 9.0, 1e-15);
  EXPECT_NEAR(spec.rho12(), -0.5, 1e-15);
  EXPECT_NEAR(spec.determinant(), 1.0 / 27.0, 1e-15);
  EXPECT_NEAR(limit_bivariate_density(0.0, 0.0, spec), kLimitAtOrigin, 1e-12);
  EXPECT_THROW(BivariateGaussianSpec::from_cells(0.5, 0.5), InvalidParameter);
  EXPECT_THROW(BivariateGaussianSpec(1.0, 1.0, 1.0), InvalidParameter);
}

TEST(BivariateGaussian, InverseAndSymmetry) {
  const auto spec = BivariateGaussianSpec::from_cells(0.2, 0.5);
  Eigen::Matrix2d sigma;
  sigma << spec.sigma11(), spec.covariance(), spec.covariance(), spec.sigma22();
  const Eigen::Matrix2d inv = sigma.inverse();
  const auto cached = spec.inverse();
  EXPECT_NEAR(cached[0], inv(0, 0), 1e-12);
  EXPECT_NEAR(cached[1], inv(0, 1), 1e-12);
  EXPECT_NEAR(cached[2], inv(1, 1), 1e-12);
  EXPECT_NEAR(spec.determinant(), sigma.determinant(), 1e-15);

  const auto sym = BivariateGaussianSpec::from_cells(0.3, 0.3);
  for (double y1 = -1.0; y1 <= 1.0; y1 += 0.3) {
    for (double y2 = -1.0; y2 <= 1.0; y2 += 0.3) {
      EXPECT_DOUBLE_EQ(limit_bivariate_density(y1, y2, sym), limit_bivariate_density(y2, y1, sym));
    }
  }
}

TEST(ScaledDensity, MatchesTransformedDirichletDensity) {
  for (double a : {5.0, 50.0, 2000.0}) {
    const double l1 = 0.2, l2 = 0.45;
    const DirichletParams p({a * l1, a * l2, a * (1.0 - l1 - l2)});
    for (double y1 = -1.5; y1 <= 1.5; y1 += 0.5) {
      for (double y2 = -1.5; y2 <= 1.5; y2 += 0.5) {
        const double x1 = l1 + y1 / std::sqrt(a), x2 = l2 + y2 / std::sqrt(a);
        const std::vector<double> x{x1, x2, 1.0 - x1 - x2};
        EXPECT_NEAR(scaled_bivariate_density(y1, y2, l1, l2, a), dirichlet_density(x, p) / a, 1e-10);
      }
    }
  }
}

TEST(ScaledDensity, ZeroOffTheSimplexImage) {
  const double a = 50.0, s = std::sqrt(a);
  EXPECT_EQ(scaled_bivariate_density(-s / 3.0 - 0.01, 0.0, 1.0 / 3.0, 1.0 / 3.0, a), 0.0);
  EXPECT_EQ(scaled_bivariate_density(3.0, 3.0, 1.0 / 3.0, 1.0 / 3.0, a), 0.0);
}

TEST(ScaledDensity, IntegratesToOne) {
  const double l1 = 1.0 / 3.0, l2 = 1.0 / 3.0, a = 50.0, s = std::sqrt(a);
  const int n = 2000;
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // x2 = (1 - x1) t maps the simplex onto the unit square.
      const double x1 = (i + 0.5) * h, t = (j + 0.5) * h, x2 = (1.0 - x1) * t;
      sum += scaled_bivariate_density(s * (x1 - l1), s * (x2 - l2), l1, l2, a) * a * (1.0 - x1);
    }
  }
  EXPECT_NEAR(sum * h * h, 1.0, 1e-3);
}

TEST(ScaledDensity, ApproachesLimitAtOrigin) {
  const double v = scaled_bivariate_density(0.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 1e4);
  EXPECT_LT(std::abs(v - kLimitAtOrigin) / kLimitAtOrigin, 0.02) << v;
}

TEST(ScaledDensity, PointwiseGapShrinks) {
  const double l1 = 1.0 / 3.0, l2 = 1.0 / 3.0;
  const auto spec = BivariateGaussianSpec::from_cells(l1, l2);
  const auto g = Grid::uniform(-1.0, 1.0, 11);
  double previous = INFINITY;
  for (double a : {1e2, 1e3, 1e4}) {
    double gap = 0.0;
    for (double y1 : g.points()) {
      for (double y2 : g.points()) {
        gap = std::max(gap, std::abs(scaled_bivariate_density(y1, y2, l1, l2, a) -
                                     limit_bivariate_density(y1, y2, spec)));
      }
    }
    EXPECT_LT(gap, previous) << "a=" << a;
    previous = gap;
  }
}

TEST(TotalVariation, IdenticalDensitiesGiveZero) {
  const auto spec = BivariateGaussianSpec::from_cells(0.25, 0.4);
  const Density2d f = [&](double y1, double y2) { return limit_bivariate_density(y1, y2, spec); };
  const QuadratureSpec quad;
  const auto tv = tv_distance_2d(f, f, limit_box(0.25, 0.4, quad), quad);
  EXPECT_NEAR(tv.value, 0.0, quad.tolerance);
}

TEST(TotalVariation, DecreasesInConcentrationAndStaysInRange) {
  const QuadratureSpec quad;
  double previous = 1.0;
  for (double a : {1e2, 1e3, 1e4}) {
    const auto tv = tv_distance_bivariate(1.0 / 3.0, 1.0 / 3.0, a, quad);
    EXPECT_GE(tv.value, 0.0);
    EXPECT_LE(tv.value, 1.0);
    EXPECT_LT(tv.value, previous) << "a=" << a;
    EXPECT_LT(tv.quad_error, 1e-3);
    previous = tv.value;
  }
  const auto rough = tv_distance_bivariate(0.1, 0.1, 0.5, quad);
  EXPECT_GE(rough.value, 0.0);
  EXPECT_LE(rough.value, 1.0);
}

TEST(Quadrature, GaussianMassOverBox) {
  const auto spec = BivariateGaussianSpec::from_cells(0.2, 0.3);
  const QuadratureSpec quad;
  const auto r = integrate_2d([&](double y1, double y2) { return limit_bivariate_density(y1, y2, spec); },
                              limit_box(0.2, 0.3, quad), quad);
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_LE(r.error, quad.tolerance);
}

}  // namespace
}  // namespace dplab
