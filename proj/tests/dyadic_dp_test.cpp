#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/dp.hpp"
#include "dplab/dyadic_dp.hpp"
#include "dplab/errors.hpp"
#include "dplab/rng.hpp"
#include "dplab/stats.hpp"

namespace dplab {
namespace {

TEST(DyadicDp, CellMassesAreConsistent) {
  DyadicDp dp(5.0, RngStream(1, 0));
  for (int depth = 0; depth <= 8; ++depth) {
    double total = 0.0;
    const std::uint64_t cells = std::uint64_t{1} << depth;
    for (std::uint64_t k = 0; k < cells; ++k) {
      const double m = dp.cell_mass(depth, k);
      ASSERT_GE(m, 0.0);
      total += m;
      if (depth < 8) {
        ASSERT_NEAR(m, dp.cell_mass(depth + 1, 2 * k) + dp.cell_mass(depth + 1, 2 * k + 1), 1e-15);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << "depth " << depth;
  }
  EXPECT_EQ(dp.cell_mass(0, 0), 1.0);
}

TEST(DyadicDp, RealizationDoesNotDependOnQueryOrder) {
  DyadicDp forward(3.0, RngStream(2, 7)), backward(3.0, RngStream(2, 7));
  std::vector<double> us;
  for (double u = 0.05; u < 1.0; u += 0.05) us.push_back(u);
  std::vector<double> qf, qb(us.size());
  for (double u : us) qf.push_back(forward.quantile(u));
  for (std::size_t i = us.size(); i-- > 0;) qb[i] = backward.quantile(us[i]);
  EXPECT_EQ(qf, qb);
  EXPECT_EQ(forward.cell_mass(10, 300), backward.cell_mass(10, 300));
}

TEST(DyadicDp, QuantileIsMonotoneAndInsideUnitInterval) {
  DyadicDp dp(20.0, RngStream(3, 0));
  double prev = 0.0;
  for (double u = 0.001; u <= 1.0; u += 0.001) {
    const double q = dp.quantile(u);
    ASSERT_GE(q, prev);
    ASSERT_GT(q, 0.0);
    ASSERT_LT(q, 1.0);
    prev = q;
  }
}

TEST(DyadicDp, CellMassesHaveBetaMarginals) {
  const double a = 7.0;
  std::vector<double> half(5000), quarter(5000);
  for (std::size_t r = 0; r < half.size(); ++r) {
    DyadicDp dp(a, RngStream(4, r));
    half[r] = dp.cell_mass(1, 0);
    quarter[r] = dp.cell_mass(2, 3);
  }
  const auto beta_cdf = [](double p, double q) {
    return [=](double x) { return boost::math::ibeta(p, q, std::min(std::max(x, 0.0), 1.0)); };
  };
  EXPECT_GT(ks_one_sample(half, beta_cdf(a / 2, a / 2)).p_value, 0.01);
  EXPECT_GT(ks_one_sample(quarter, beta_cdf(a / 4, 3 * a / 4)).p_value, 0.01);
}

// The dyadic and stick-breaking constructions realize the same random
// measure, so their quantiles agree in distribution.
TEST(DyadicDp, QuantilesMatchStickBreaking) {
  const auto h = BaseMeasure::uniform();
  for (double a : {2.0, 50.0}) {
    for (double u : {0.25, 0.5, 0.9}) {
      std::vector<double> dyadic(3000), stick(3000);
      for (std::size_t r = 0; r < dyadic.size(); ++r) {
        DyadicDp dp(a, RngStream(5, r));
        dyadic[r] = dp.quantile(u);
        RngStream rng(6, r);
        stick[r] = dp_quantile(stick_breaking_sample(a, h, {}, rng), u);
      }
      EXPECT_GT(ks_two_sample(dyadic, stick).p_value, 0.01) << "a=" << a << " u=" << u;
    }
  }
}

TEST(DyadicDp, RejectsBadArguments) {
  EXPECT_THROW(DyadicDp(0.0, RngStream(1, 0)), InvalidParameter);
  EXPECT_THROW(DyadicDp(1.0, RngStream(1, 0), 0), InvalidArgument);
  DyadicDp dp(1.0, RngStream(1, 0));
  EXPECT_THROW(dp.quantile(0.0), InvalidArgument);
  EXPECT_THROW(dp.quantile(1.5), InvalidArgument);
  EXPECT_THROW(dp.cell_mass(3, 8), InvalidArgument);
}

}  // namespace
}  // namespace dplab
