#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/rng.hpp"

namespace dplab {

/// When to stop breaking the stick: remaining mass below `epsilon`, or
/// `max_atoms` sticks drawn, whichever comes first.
struct TruncationPolicy {
  double epsilon = 1e-10;
  std::optional<std::size_t> max_atoms;
};

/// Number of sticks after which the expected remaining mass (a/(1+a))^N
/// drops below epsilon.
std::size_t expected_atoms_for(double a, double epsilon);

/// One realization of DP(a, H): finitely many atoms with positive weights,
/// plus the stick mass left over by truncation.
///
/// Atoms are strictly increasing; coincident atoms are merged by adding
/// their weights. Sum(weights) + truncation_remainder == 1 to 1e-12.
class DpSample {
 public:
  DpSample(std::vector<double> atoms, std::vector<double> weights, double truncation_remainder,
           double concentration);

  [[nodiscard]] std::span<const double> atoms() const { return atoms_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  /// cumulative()[i] = weights[0] + ... + weights[i]
  [[nodiscard]] std::span<const double> cumulative() const { return cumulative_; }
  [[nodiscard]] double truncation_remainder() const { return remainder_; }
  [[nodiscard]] double concentration() const { return concentration_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double remainder_;
  double concentration_;
};

/// Draws atom locations for the stick-breaking sampler.
using AtomSampler = std::function<double(RngStream&)>;

/// Sethuraman stick-breaking: V_i ~ Beta(1, a), J_i = V_i prod_{j<i} (1 - V_j),
/// atoms i.i.d. from `draw_atom`.
DpSample stick_breaking_sample(double a, const AtomSampler& draw_atom,
                               const TruncationPolicy& trunc, RngStream& rng);
DpSample stick_breaking_sample(double a, const BaseMeasure& base, const TruncationPolicy& trunc,
                               RngStream& rng);

/// (P(A_1), ..., P(A_k)) ~ Dirichlet(a H(A_1), ..., a H(A_k)) for a partition
/// of the support. Null cells get exactly 0.
std::vector<double> sample_fidi(double a, const BaseMeasure& base,
                                std::span<const BorelSet> partition, RngStream& rng);
/// Same, for a partition given as elementary intervals.
std::vector<double> sample_fidi(double a, const BaseMeasure& base,
                                std::span<const Interval> partition, RngStream& rng);

/// P((-inf, t]); the truncation remainder is not counted.
double dp_cdf(const DpSample& sample, double t);
/// inf{x : P(x) >= u} for u in (0, 1]. If u exceeds the retained mass the
/// largest atom is returned.
double dp_quantile(const DpSample& sample, double u);
/// P(S) from the atoms inside S.
double dp_measure(const DpSample& sample, const BorelSet& set);

/// E[P(A)] and Var[P(A)] under DP(a, H).
struct Moments {
  double mean;
  double variance;
};
Moments dp_moments(double a, const BaseMeasure& base, const BorelSet& set);

/// E[P(A) P(B)] = (H(A n B) + a H(A) H(B)) / (1 + a).
double dp_cross_moment(double a, const BaseMeasure& base, const BorelSet& lhs,
                       const BorelSet& rhs);

/// Posterior DP parameters after observing `data`: a* = a + n and
/// H* = (a H + sum_k delta_{X_k}) / (a + n).
class PosteriorParams {
 public:
  PosteriorParams(double prior_a, BaseMeasure prior_base, std::vector<double> data);

  [[nodiscard]] double a_star() const { return a_star_; }
  [[nodiscard]] double prior_a() const { return prior_a_; }
  [[nodiscard]] const BaseMeasure& prior_base() const { return base_; }
  [[nodiscard]] std::span<const double> data() const { return data_; }
  /// Mixture weight of the prior base measure, a / (a + n).
  [[nodiscard]] double prior_weight() const { return prior_a_ / a_star_; }

  [[nodiscard]] double h_star_cdf(double t) const;
  [[nodiscard]] double h_star_measure(const BorelSet& set) const;
  /// With probability a/(a+n) a draw from H, otherwise a uniformly chosen data point.
  double sample_h_star(RngStream& rng) const;

 private:
  double prior_a_;
  double a_star_;
  BaseMeasure base_;
  std::vector<double> data_;  // sorted
};

PosteriorParams posterior_update(double a, const BaseMeasure& base, std::vector<double> data);

DpSample stick_breaking_sample(const PosteriorParams& posterior, const TruncationPolicy& trunc,
                               RngStream& rng);

}  // namespace dplab
