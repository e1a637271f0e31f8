#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/dp.hpp"
#include "dplab/limit.hpp"
#include "dplab/stats.hpp"

namespace dplab {

/// How many standard errors each kind of check may miss by.
struct Tolerances {
  double mean_se = 3.0;      // headline means
  double moment_se = 4.0;    // other equality-in-expectation checks
  double variance_se = 5.0;  // limit-variance targets, delta-method SE
  double ks_level = 0.01;
};

/// estimate vs target in units of the estimate's standard error.
struct Comparison {
  enum class Kind { kTwoSided, kUpperBound };

  std::string name;
  double estimate;
  double se;
  double target;
  double tolerance_se;
  Kind kind = Kind::kTwoSided;
  bool pass = false;

  /// |estimate - target| <= tol * se, or estimate <= target + tol * se for bounds.
  [[nodiscard]] bool evaluate() const;
};

Comparison make_comparison(std::string name, Estimate est, double target, double tolerance_se,
                           Comparison::Kind kind = Comparison::Kind::kTwoSided);

struct KsCheck {
  std::string name;
  double statistic;
  double p_value;
  double level;
  bool pass;  // p_value > level
};

/// Deterministic assertion (exact identity, monotone trend, inequality sweep).
struct Check {
  std::string name;
  double observed;
  double expected;
  bool pass;
};

/// A value carried for the record but not tested.
struct ReferenceValue {
  std::string name;
  double value;
};

struct SeedInfo {
  std::uint64_t master_seed;
  std::uint64_t first_stream;
  std::uint64_t last_stream;
};

struct NamedEstimate {
  std::string name;
  Estimate estimate;
};

struct McSummary {
  std::string experiment;
  std::size_t replications = 0;
  std::vector<NamedEstimate> estimates;
  std::vector<Comparison> comparisons;
  std::vector<KsCheck> ks_checks;
  std::vector<Check> checks;
  std::vector<ReferenceValue> references;
  SeedInfo seed_info{};

  [[nodiscard]] bool pass() const;
  void add(std::string name, Estimate est, double target, double tolerance_se,
           Comparison::Kind kind = Comparison::Kind::kTwoSided);
  void add_ks(std::string name, KsResult result, double level);
  void add_check(std::string name, double observed, double expected, bool pass);
};

/// Which exact representation produces P_a(A) in a replication.
enum class DpSampler { kFidi, kStickBreaking };

/// Means, variances and pairwise cross-moments of P_a over `sets`, against
/// dp_moments / dp_cross_moment. Replication r uses stream r.
McSummary moment_check(double a, const BaseMeasure& base, std::span<const BorelSet> sets,
                       std::size_t replications, std::uint64_t seed, const Tolerances& tol = {},
                       DpSampler sampler = DpSampler::kFidi, const TruncationPolicy& trunc = {});

/// E[(P(t) - P(t1))(P(t2) - P(t))] under DP(a, uniform) against the exact
/// a/(a+1)(t - t1)(t2 - t), and the bound a/(a+1)(t2 - t1)^2.
McSummary modulus_check(double a, double t1, double t, double t2, std::size_t replications,
                        std::uint64_t seed, const Tolerances& tol = {});

/// (D_a(S_1), ..., D_a(S_k)): mean vs 0, covariance vs bb_cov, and KS of each
/// marginal standardized by its limit variance vs N(0, 1).
McSummary fidi_normality_check(double a, const BaseMeasure& base, std::span<const BorelSet> sets,
                               std::size_t replications, std::uint64_t seed,
                               const Tolerances& tol = {});

/// Stick-breaking vs finite-dimensional Dirichlet draws over a partition:
/// two-sample KS per coordinate plus moments of both against closed forms.
/// Stick-breaking replications use streams [0, R), Dirichlet ones [R, 2R).
McSummary representation_check(double a, const BaseMeasure& base,
                               std::span<const BorelSet> partition, std::size_t replications,
                               std::uint64_t seed, const Tolerances& tol = {},
                               const TruncationPolicy& trunc = {});

/// DP(a*, H*) after observing `data`: a* = a + n exactly and MC means of
/// P*(A) against H*(A).
McSummary posterior_check(double a, const BaseMeasure& base, std::vector<double> data,
                          std::span<const BorelSet> sets, std::size_t replications,
                          std::uint64_t seed, const Tolerances& tol = {},
                          const TruncationPolicy& trunc = {});

/// sup_x |P(x) - H(x)|, from right values and left limits at the atoms.
double sup_deviation(const DpSample& sample, const BaseMeasure& base);
/// int (P - H)^2 dH, integrated exactly between consecutive atoms.
double cvm_deviation(const DpSample& sample, const BaseMeasure& base);

/// d^3 / 3 <= int (P - H)^2 dH with d the sup deviation. The printed
/// d^{3/2} / sqrt(3) form is reported alongside for the record.
struct DlCheck {
  double sup;
  double lhs;
  double rhs;
  double printed_lhs;
  bool holds;
};
DlCheck dl_inequality_check(const DpSample& sample, const BaseMeasure& base);

struct GcCurve {
  std::vector<double> a_values;
  std::vector<double> mean_sup;
  std::vector<double> se_sup;
  std::vector<double> mean_cvm;
  std::vector<double> se_cvm;
  /// Least-squares slope of log mean_sup against log a.
  double fitted_rate = 0.0;
  std::size_t dl_samples = 0;
  std::size_t dl_violations = 0;
  std::size_t printed_form_violations = 0;
};

/// Mean sup-norm and Cramer-von Mises deviation of stick-breaking samples
/// for each a. Replication r uses stream r at every a.
GcCurve gc_study(std::span<const double> a_values, const BaseMeasure& base,
                 std::size_t replications, std::uint64_t seed, const TruncationPolicy& trunc = {});

/// Pass flags for a GcCurve: strictly decreasing sup-norm, rate inside
/// [rate_lower, rate_upper], no inequality violations.
std::vector<Check> gc_checks(const GcCurve& curve, double rate_lower = -0.6,
                             double rate_upper = -0.4);

/// Which representation produces quantiles in quantile_limit_study.
enum class QuantileSampler { kDyadic, kStickBreaking };

/// Limit variance of sqrt(a)(IQR_a - (q3 - q1)) implied by the quantile-process covariance.
double iqr_limit_variance(const BaseMeasure& base);
/// 3/h^2(q3) + 3/(16 h^2(q1)) - 2/(h(q1) h(q3)), kept only for comparison.
double iqr_printed_variance(const BaseMeasure& base);

/// Covariance of Q_a at `u_points`, the median and IQR variances, and KS
/// normality of the standardized median, each against its limit.
McSummary quantile_limit_study(std::span<const double> a_values, const BaseMeasure& base,
                               std::span<const double> u_points, std::size_t replications,
                               std::uint64_t seed, const Tolerances& tol = {},
                               QuantileSampler sampler = QuantileSampler::kDyadic,
                               const TruncationPolicy& trunc = {});

struct DensityRow {
  double a;
  double max_gap;
  double tv_distance;
  double quad_error;
  double scaled_integral;
  double scaled_integral_error;
};

struct DensityStudy {
  double l1, l2;
  std::vector<DensityRow> rows;
  double limit_at_origin;
  double limit_at_origin_target;  // 1 / (2 pi sqrt(det Sigma))
  std::vector<Check> checks;

  [[nodiscard]] bool pass() const;
};

/// Scaled exact density vs its Gaussian limit on grid x grid, and the TV
/// distance, for each a.
DensityStudy density_convergence_study(double l1, double l2, std::span<const double> a_values,
                                       const Grid& grid, const QuadratureSpec& quad = {},
                                       double tolerance = 1e-3);

}  // namespace dplab
