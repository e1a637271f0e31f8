#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/dp.hpp"
#include "dplab/errors.hpp"
#include "dplab/limit.hpp"
#include "dplab/rng.hpp"
#include "dplab/verify.hpp"

namespace dplab {
namespace {

const Comparison& find(const McSummary& s, const std::string& name) {
  const auto it = std::find_if(s.comparisons.begin(), s.comparisons.end(),
                               [&](const Comparison& c) { return c.name == name; });
  if (it == s.comparisons.end()) throw std::runtime_error("no comparison " + name);
  return *it;
}

void expect_recomputable(const McSummary& s) {
  for (const auto& c : s.comparisons) {
    const bool two_sided = std::abs(c.estimate - c.target) <= c.tolerance_se * c.se;
    const bool upper = c.estimate <= c.target + c.tolerance_se * c.se;
    EXPECT_EQ(c.pass, c.kind == Comparison::Kind::kTwoSided ? two_sided : upper) << c.name;
    EXPECT_EQ(c.pass, c.evaluate()) << c.name;
    if (s.replications > 1 && c.target != 0.0) EXPECT_GT(c.se, 0.0) << c.name;
  }
  for (const auto& k : s.ks_checks) EXPECT_EQ(k.pass, k.p_value > k.level) << k.name;
  bool all = true;
  for (const auto& c : s.comparisons) all = all && c.pass;
  for (const auto& k : s.ks_checks) all = all && k.pass;
  for (const auto& c : s.checks) all = all && c.pass;
  EXPECT_EQ(s.pass(), all);
}

TEST(Comparison, PassFlagFollowsTolerance) {
  const auto inside = make_comparison("x", {1.0, 0.1}, 1.25, 3.0);
  EXPECT_TRUE(inside.pass);
  const auto outside = make_comparison("x", {1.0, 0.1}, 1.35, 3.0);
  EXPECT_FALSE(outside.pass);
  const auto bound = make_comparison("x", {1.0, 0.1}, 0.8, 3.0, Comparison::Kind::kUpperBound);
  EXPECT_TRUE(bound.pass);
  const auto above = make_comparison("x", {1.0, 0.1}, 0.6, 3.0, Comparison::Kind::kUpperBound);
  EXPECT_FALSE(above.pass);
  EXPECT_TRUE(make_comparison("x", {0.0, 0.0}, 0.0, 4.0).pass);
}

TEST(MomentCheck, UniformBaseExamples) {
  const auto h = BaseMeasure::uniform();
  const std::vector<BorelSet> sets{BorelSet::interval(0.0, 0.3), BorelSet::interval(0.3, 0.5)};
  const auto s = moment_check(10.0, h, sets, 100000, 11);
  EXPECT_EQ(s.replications, 100000u);
  EXPECT_EQ(find(s, "mean[0]").target, 0.3);
  EXPECT_EQ(find(s, "mean[0]").tolerance_se, 3.0);
  EXPECT_TRUE(find(s, "mean[0]").pass);
  EXPECT_NEAR(find(s, "var[0]").target, 0.21 / 11.0, 1e-15);
  EXPECT_EQ(find(s, "var[0]").tolerance_se, 4.0);
  EXPECT_TRUE(find(s, "var[0]").pass);
  EXPECT_TRUE(s.pass());
  expect_recomputable(s);

  const auto one = moment_check(1.0, h, sets, 100000, 12);
  EXPECT_NEAR(find(one, "cross[0,1]").target, 0.03, 1e-15);
  EXPECT_TRUE(find(one, "cross[0,1]").pass);
  expect_recomputable(one);
}

TEST(MomentCheck, StickBreakingSamplerAndOverlap) {
  const auto h = BaseMeasure::normal();
  const std::vector<BorelSet> sets{BorelSet::half_line(0.0), BorelSet::interval(-1.0, 1.0)};
  const auto s = moment_check(5.0, h, sets, 5000, 13, {}, DpSampler::kStickBreaking);
  EXPECT_NEAR(find(s, "cross[0,1]").target, dp_cross_moment(5.0, h, sets[0], sets[1]), 1e-15);
  EXPECT_TRUE(s.pass());
  expect_recomputable(s);
  EXPECT_THROW(moment_check(5.0, h, sets, 1, 13), InvalidArgument);
}

TEST(ModulusCheck, Examples) {
  const auto s = modulus_check(1.0, 0.0, 0.5, 1.0, 100000, 14);
  EXPECT_NEAR(find(s, "increment_product").target, 0.125, 1e-15);
  EXPECT_TRUE(find(s, "increment_product").pass);
  EXPECT_EQ(find(s, "increment_product_bound").kind, Comparison::Kind::kUpperBound);
  EXPECT_NEAR(find(s, "increment_product_bound").target, 0.5, 1e-15);
  EXPECT_TRUE(s.pass());
  expect_recomputable(s);

  const auto degenerate = modulus_check(3.0, 0.2, 0.2, 0.9, 1000, 15);
  EXPECT_EQ(find(degenerate, "increment_product").target, 0.0);
  EXPECT_EQ(find(degenerate, "increment_product").estimate, 0.0);
  EXPECT_TRUE(degenerate.pass());

  EXPECT_THROW(modulus_check(1.0, 0.5, 0.4, 1.0, 1000, 1), InvalidArgument);
  EXPECT_THROW(modulus_check(1.0, 0.0, 0.4, 1.1, 1000, 1), InvalidArgument);
}

// Property: the bound holds across a sweep of (a, t1, t, t2).
TEST(ModulusCheck, BoundHoldsAcrossSweep) {
  RngStream gen(16, 0);
  for (int trial = 0; trial < 10; ++trial) {
    double t[3] = {gen.uniform(), gen.uniform(), gen.uniform()};
    std::sort(t, t + 3);
    const double a = 0.1 + 50.0 * gen.uniform();
    const auto s = modulus_check(a, t[0], t[1], t[2], 4000, 17 + static_cast<std::uint64_t>(trial));
    EXPECT_TRUE(find(s, "increment_product_bound").pass) << trial;
    expect_recomputable(s);
  }
}

TEST(FidiNormality, CanonicalFamily) {
  const auto h = BaseMeasure::uniform();
  const std::vector<BorelSet> sets{BorelSet::interval(0.0, 0.25), BorelSet::interval(0.25, 0.5),
                                   BorelSet::interval(0.5, 1.0)};
  const auto s = fidi_normality_check(1e4, h, sets, 10000, 18);
  EXPECT_TRUE(s.pass());
  EXPECT_EQ(s.ks_checks.size(), 3u);
  EXPECT_NEAR(find(s, "cov[0,1]").target, -0.0625, 1e-15);
  expect_recomputable(s);
}

TEST(FidiNormality, VarianceAndCovarianceExamples) {
  const auto h = BaseMeasure::uniform();
  const std::vector<BorelSet> sets{BorelSet::interval(0.0, 0.3), BorelSet::interval(0.3, 0.5),
                                   BorelSet::interval(0.5, 0.6)};
  const auto s = fidi_normality_check(1e4, h, sets, 10000, 19);
  EXPECT_NEAR(find(s, "cov[0,0]").target, 0.21, 1e-15);
  EXPECT_TRUE(find(s, "cov[0,0]").pass);
  EXPECT_NEAR(find(s, "cov[1,2]").target, -0.02, 1e-15);
  EXPECT_TRUE(find(s, "cov[1,2]").pass);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(find(s, "mean[" + std::to_string(i) + "]").pass);
}

TEST(RepresentationCheck, StickAndFidiAgree) {
  const auto h = BaseMeasure::normal();
  const std::vector<BorelSet> partition{BorelSet::half_line(-0.5), BorelSet::interval(-0.5, 0.7),
                                        BorelSet::interval(0.7, std::numeric_limits<double>::infinity())};
  const auto s = representation_check(4.0, h, partition, 4000, 20);
  EXPECT_TRUE(s.pass());
  EXPECT_EQ(s.ks_checks.size(), 3u);
  expect_recomputable(s);
}

TEST(PosteriorCheck, Examples) {
  const std::vector<BorelSet> sets{BorelSet::interval(0.0, 0.3), BorelSet::interval(0.3, 0.5),
                                   BorelSet::interval(0.5, 1.0)};
  const auto s = posterior_check(2.0, BaseMeasure::uniform(), {0.2, 0.4, 0.6}, sets, 10000, 21);
  ASSERT_FALSE(s.checks.empty());
  EXPECT_EQ(s.checks[0].name, "a_star");
  EXPECT_EQ(s.checks[0].observed, 5.0);
  EXPECT_NEAR(find(s, "mean[1]").target, (2.0 * 0.2 + 1.0) / 5.0, 1e-15);
  EXPECT_TRUE(s.pass());
  expect_recomputable(s);
}

// Brute force: |P - H| at atoms, just left of atoms, and on a fine grid.
double brute_sup(const DpSample& s) {
  double best = 0.0;
  const auto probe = [&](double x) { best = std::max(best, std::abs(dp_cdf(s, x) - std::clamp(x, 0.0, 1.0))); };
  for (double x : s.atoms()) {
    probe(x);
    probe(std::nextafter(x, -1.0));
  }
  for (int i = 0; i <= 100000; ++i) probe(i / 100000.0);
  return best;
}

TEST(Deviation, SupNormMatchesBruteForce) {
  const auto h = BaseMeasure::uniform();
  for (std::uint64_t r = 0; r < 100; ++r) {
    RngStream rng(22, r);
    TruncationPolicy trunc;
    trunc.max_atoms = 1 + r % 30;
    const auto s = stick_breaking_sample(0.5 + 0.2 * static_cast<double>(r), h, trunc, rng);
    EXPECT_NEAR(sup_deviation(s, h), brute_sup(s), 1e-9) << r;
  }
}

double quadrature_cvm(const DpSample& s, const BaseMeasure& h) {
  using boost::math::quadrature::gauss_kronrod;
  const auto [lo, hi] = h.support();
  std::vector<double> cuts{lo};
  for (double x : s.atoms()) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double level = dp_cdf(s, 0.5 * (cuts[i] + cuts[i + 1]));
    const double step = std::isfinite(cuts[i]) ? level : 0.0;
    total += gauss_kronrod<double, 61>::integrate(
        [&](double x) {
          const double d = step - h.cdf(x);
          return d * d * h.density(x);
        },
        cuts[i], cuts[i + 1], 8, 1e-12);
  }
  return total;
}

TEST(Deviation, CvmMatchesQuadrature) {
  const std::vector<BaseMeasure> bases{BaseMeasure::uniform(), BaseMeasure::normal(0.5, 2.0),
                                       BaseMeasure::exponential(1.5)};
  for (std::uint64_t r = 0; r < 60; ++r) {
    const auto& h = bases[r % bases.size()];
    RngStream rng(23, r);
    TruncationPolicy trunc;
    trunc.max_atoms = 1 + r % 50;
    const auto s = stick_breaking_sample(0.3 + 0.3 * static_cast<double>(r), h, trunc, rng);
    EXPECT_NEAR(cvm_deviation(s, h), quadrature_cvm(s, h), 1e-8) << h.label() << " " << r;
  }
}

TEST(Deviation, SingleAtomExample) {
  const auto h = BaseMeasure::uniform();
  const DpSample s({0.5}, {1.0}, 0.0, 1e-3);
  EXPECT_DOUBLE_EQ(sup_deviation(s, h), 0.5);
  EXPECT_NEAR(cvm_deviation(s, h), 1.0 / 12.0, 1e-15);
  const auto dl = dl_inequality_check(s, h);
  EXPECT_NEAR(dl.lhs, 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(dl.rhs, 1.0 / 12.0, 1e-15);
  EXPECT_TRUE(dl.holds);
  // The printed d^{3/2}/sqrt(3) form fails here.
  EXPECT_NEAR(dl.printed_lhs, std::pow(0.5, 1.5) / std::sqrt(3.0), 1e-15);
  EXPECT_GT(dl.printed_lhs, dl.rhs);
}

// An n-step staircase tends to H; both sides of the inequality go to 0.
TEST(Deviation, StaircaseDeviationVanishes) {
  const auto h = BaseMeasure::uniform();
  std::vector<double> atoms, weights;
  const int n = 1000;
  for (int i = 1; i <= n; ++i) {
    atoms.push_back(static_cast<double>(i) / n);
    weights.push_back(1.0 / n);
  }
  const DpSample stairs(atoms, weights, 0.0, 1.0);
  const auto dl = dl_inequality_check(stairs, h);
  EXPECT_NEAR(dl.sup, 1.0 / n, 1e-12);
  EXPECT_NEAR(dl.rhs, 1.0 / (3.0 * n * n), 1e-12);
  EXPECT_TRUE(dl.holds);
}

// Property: d^3/3 <= CvM on every sample drawn here.
TEST(Deviation, InequalitySweep) {
  const std::vector<BaseMeasure> bases{BaseMeasure::uniform(), BaseMeasure::normal(), BaseMeasure::exponential()};
  std::size_t samples = 0;
  for (double a : {0.01, 0.5, 10.0, 200.0}) {
    for (std::uint64_t r = 0; r < 1000; ++r) {
      RngStream rng(24, r);
      const auto& h = bases[r % bases.size()];
      const auto dl = dl_inequality_check(stick_breaking_sample(a, h, {}, rng), h);
      ASSERT_TRUE(dl.holds) << "a=" << a << " r=" << r << " lhs=" << dl.lhs << " rhs=" << dl.rhs;
      ++samples;
    }
  }
  EXPECT_EQ(samples, 4000u);
}

TEST(GcStudy, DecayAndRate) {
  const std::vector<double> a_values{10.0, 100.0, 1000.0};
  const auto curve = gc_study(a_values, BaseMeasure::uniform(), 1000, 25);
  ASSERT_EQ(curve.mean_sup.size(), 3u);
  ASSERT_EQ(curve.mean_cvm.size(), 3u);
  for (double m : curve.mean_sup) {
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
  EXPECT_EQ(curve.dl_samples, 3000u);
  EXPECT_EQ(curve.dl_violations, 0u);
  const auto checks = gc_checks(curve);
  for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " " << c.observed;
  EXPECT_GE(curve.fitted_rate, -0.6);
  EXPECT_LE(curve.fitted_rate, -0.4);
}

TEST(GcStudy, ChecksFlagFailures) {
  GcCurve curve;
  curve.a_values = {1.0, 10.0};
  curve.mean_sup = {0.1, 0.2};
  curve.fitted_rate = 0.3;
  curve.dl_samples = 10;
  curve.dl_violations = 1;
  for (const auto& c : gc_checks(curve)) EXPECT_FALSE(c.pass) << c.name;
}

TEST(QuantileStudy, UniformMedianAndIqr) {
  const auto h = BaseMeasure::uniform();
  const std::vector<double> a_values{1e4};
  const std::vector<double> u_points{0.25, 0.5, 0.75};
  const auto s = quantile_limit_study(a_values, h, u_points, 10000, 26);
  EXPECT_EQ(find(s, "a=10000.median_variance").target, 0.25);
  EXPECT_EQ(find(s, "a=10000.cov[0.5,0.5]").target, limit_quantile_cov(0.5, 0.5, h));
  EXPECT_NEAR(find(s, "a=10000.iqr_variance").target, 0.25, 1e-15);
  EXPECT_EQ(find(s, "a=10000.iqr_variance").tolerance_se, 5.0);
  EXPECT_TRUE(s.pass());
  expect_recomputable(s);
  const auto printed = std::find_if(s.references.begin(), s.references.end(),
                                    [](const ReferenceValue& r) { return r.name == "iqr_variance_printed_formula"; });
  ASSERT_NE(printed, s.references.end());
  EXPECT_NEAR(printed->value, 1.1875, 1e-15);
}

TEST(QuantileStudy, IqrTargets) {
  EXPECT_NEAR(iqr_limit_variance(BaseMeasure::uniform()), 0.25, 1e-15);
  // Exponential(1): h(q1) = 0.75, h(q3) = 0.25.
  const double h1 = 0.75, h3 = 0.25;
  EXPECT_NEAR(iqr_limit_variance(BaseMeasure::exponential()),
              0.1875 / (h3 * h3) + 0.1875 / (h1 * h1) - 0.125 / (h1 * h3), 1e-12);
  EXPECT_NEAR(iqr_printed_variance(BaseMeasure::exponential()),
              3.0 / (h3 * h3) + 3.0 / (16.0 * h1 * h1) - 2.0 / (h1 * h3), 1e-12);
}

TEST(DensityStudy, ConvergesForEqualCells) {
  const std::vector<double> a_values{1e2, 1e3, 1e4};
  const auto study = density_convergence_study(1.0 / 3.0, 1.0 / 3.0, a_values, Grid::uniform(-2.0, 2.0, 11));
  ASSERT_EQ(study.rows.size(), 3u);
  EXPECT_NEAR(study.limit_at_origin, std::sqrt(27.0) / (2.0 * std::numbers::pi), 1e-12);
  EXPECT_LT(study.rows[1].tv_distance, study.rows[0].tv_distance);
  EXPECT_LT(study.rows[2].tv_distance, study.rows[1].tv_distance);
  EXPECT_LT(study.rows[2].max_gap, study.rows[0].max_gap);
  for (const auto& row : study.rows) EXPECT_NEAR(row.scaled_integral, 1.0, 1e-3);
  for (const auto& c : study.checks) EXPECT_TRUE(c.pass) << c.name;
  EXPECT_TRUE(study.pass());
}

}  // namespace
}  // namespace dplab
