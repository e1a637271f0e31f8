#include "dplab/dp.hpp"

#include <algorithm>
#include <boost/sort/spreadsort/spreadsort.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "dplab/errors.hpp"
#include "dplab/variates.hpp"

namespace dplab {
namespace {

// Neumaier-compensated sum; plain summation of 10^5 weights drifts past 1e-12.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

void require_concentration(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidParameter("concentration must be positive and finite, got " + std::to_string(a));
  }
}

std::vector<double> fidi_from_masses(double a, std::span<const double> masses, RngStream& rng) {
  std::vector<double> alphas;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > 0.0) {
      alphas.push_back(a * masses[i]);
      live.push_back(i);
    }
  }
  std::vector<double> out(masses.size(), 0.0);
  if (live.size() == 1) {
    out[live.front()] = 1.0;
    return out;
  }
  const auto draw = sample_dirichlet(DirichletParams(std::move(alphas)), rng);
  for (std::size_t j = 0; j < live.size(); ++j) out[live[j]] = draw[j];
  return out;
}

void require_unit_total(std::span<const double> masses) {
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidPartition("cell measures sum to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace

std::size_t expected_atoms_for(double a, double epsilon) {
  require_concentration(a);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidTruncation("epsilon must lie in (0,1)");
  // smallest N with (a/(1+a))^N < epsilon
  return static_cast<std::size_t>(std::floor(std::log(epsilon) / -std::log1p(1.0 / a))) + 1;
}

DpSample::DpSample(std::vector<double> atoms, std::vector<double> weights,
                   double truncation_remainder, double concentration)
    : remainder_(truncation_remainder), concentration_(concentration) {
  require_concentration(concentration);
  if (atoms.size() != weights.size()) throw InvalidArgument("atoms and weights differ in length");
  if (!(truncation_remainder >= 0.0 && truncation_remainder < 1.0)) {
    throw InvalidArgument("truncation remainder must lie in [0,1)");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(atoms[i])) {
      throw InvalidArgument("weights must be positive and atoms finite");
    }
  }
  const double total = compensated_sum(weights) + truncation_remainder;
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("weights plus remainder sum to " + std::to_string(total));
  }

  if (!std::is_sorted(atoms.begin(), atoms.end())) {
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
    std::vector<double> a2(atoms.size()), w2(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      a2[i] = atoms[order[i]];
      w2[i] = weights[order[i]];
    }
    atoms = std::move(a2);
    weights = std::move(w2);
  }

  atoms_.reserve(atoms.size());
  weights_.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms_.empty() && atoms[i] == atoms_.back()) {
      weights_.back() += weights[i];
    } else {
      atoms_.push_back(atoms[i]);
      weights_.push_back(weights[i]);
    }
  }
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

DpSample stick_breaking_sample(double a, const AtomSampler& draw_atom,
                               const TruncationPolicy& trunc, RngStream& rng) {
  require_concentration(a);
  if (!(trunc.epsilon > 0.0) && !trunc.max_atoms) {
    throw InvalidTruncation("need a positive epsilon or a max_atoms cap");
  }
  if (trunc.max_atoms && *trunc.max_atoms == 0) throw InvalidTruncation("max_atoms must be >= 1");

  std::vector<std::pair<double, double>> sticks;
  if (trunc.epsilon > 0.0 && trunc.epsilon < 1.0) sticks.reserve(expected_atoms_for(a, trunc.epsilon));

  double rest = 1.0;
  while (rest >= trunc.epsilon && !(trunc.max_atoms && sticks.size() >= *trunc.max_atoms)) {
    // Beta(1, a) by inversion: 1 - U^{1/a}.
    const double v = -std::expm1(std::log(rng.uniform()) / a);
    const double atom = draw_atom(rng);
    const double next_rest = rest * (1.0 - v);
    // rest - next_rest rather than v * rest keeps the stick identity tight.
    const double w = rest - next_rest;
    rest = next_rest;
    if (w > 0.0) sticks.emplace_back(atom, w);
    if (rest == 0.0) break;
  }

  using Stick = std::pair<double, double>;
  boost::sort::spreadsort::float_sort(
      sticks.begin(), sticks.end(),
      [](const Stick& s, unsigned offset) {
        return boost::sort::spreadsort::float_mem_cast<double, std::int64_t>(s.first) >> offset;
      },
      [](const Stick& x, const Stick& y) { return x.first < y.first; });
  std::vector<double> atoms(sticks.size()), weights(sticks.size());
  for (std::size_t i = 0; i < sticks.size(); ++i) {
    atoms[i] = sticks[i].first;
    weights[i] = sticks[i].second;
  }
  return DpSample(std::move(atoms), std::move(weights), rest, a);
}

DpSample stick_breaking_sample(double a, const BaseMeasure& base, const TruncationPolicy& trunc,
                               RngStream& rng) {
  return stick_breaking_sample(
      a, [&base](RngStream& r) { return base.sample(r); }, trunc, rng);
}

std::vector<double> sample_fidi(double a, const BaseMeasure& base,
                                std::span<const BorelSet> partition, RngStream& rng) {
  require_concentration(a);
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (std::size_t j = i + 1; j < partition.size(); ++j) {
      if (base.measure(partition[i].intersect(partition[j])) > 0.0) {
        throw InvalidPartition("cells " + std::to_string(i) + " and " + std::to_string(j) +
                               " overlap");
      }
    }
  }
  std::vector<double> masses(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) masses[i] = base.measure(partition[i]);
  require_unit_total(masses);
  return fidi_from_masses(a, masses, rng);
}

std::vector<double> sample_fidi(double a, const BaseMeasure& base,
                                std::span<const Interval> partition, RngStream& rng) {
  require_concentration(a);
  std::vector<Interval> sorted(partition.begin(), partition.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& x, const Interval& y) { return x.lower < y.lower; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1].lower < sorted[i].upper) throw InvalidPartition("cells overlap");
  }
  std::vector<double> masses(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) masses[i] = base.measure(partition[i]);
  require_unit_total(masses);
  return fidi_from_masses(a, masses, rng);
}

double dp_cdf(const DpSample& sample, double t) {
  const auto atoms = sample.atoms();
  const auto idx = static_cast<std::size_t>(std::upper_bound(atoms.begin(), atoms.end(), t) - atoms.begin());
  return idx == 0 ? 0.0 : sample.cumulative()[idx - 1];
}

double dp_quantile(const DpSample& sample, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw InvalidArgument("quantile level must lie in (0,1]");
  if (sample.size() == 0) throw InvalidArgument("sample has no atoms");
  const auto cum = sample.cumulative();
  auto it = std::lower_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return sample.atoms()[static_cast<std::size_t>(it - cum.begin())];
}

double dp_measure(const DpSample& sample, const BorelSet& set) {
  double total = 0.0;
  for (const auto& iv : set.intervals()) total += dp_cdf(sample, iv.upper) - dp_cdf(sample, iv.lower);
  return total;
}

Moments dp_moments(double a, const BaseMeasure& base, const BorelSet& set) {
  require_concentration(a);
  const double h = base.measure(set);
  return {h, h * (1.0 - h) / (1.0 + a)};
}

double dp_cross_moment(double a, const BaseMeasure& base, const BorelSet& lhs,
                       const BorelSet& rhs) {
  require_concentration(a);
  const double joint = base.measure(lhs.intersect(rhs));
  return (joint + a * base.measure(lhs) * base.measure(rhs)) / (1.0 + a);
}

PosteriorParams::PosteriorParams(double prior_a, BaseMeasure prior_base, std::vector<double> data)
    : prior_a_(prior_a),
      a_star_(prior_a + static_cast<double>(data.size())),
      base_(std::move(prior_base)),
      data_(std::move(data)) {
  require_concentration(prior_a);
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidArgument("posterior data must be finite");
  }
  std::sort(data_.begin(), data_.end());
}

double PosteriorParams::h_star_cdf(double t) const {
  if (data_.empty()) return base_.cdf(t);
  const auto below = static_cast<double>(std::upper_bound(data_.begin(), data_.end(), t) - data_.begin());
  return (prior_a_ * base_.cdf(t) + below) / a_star_;
}

double PosteriorParams::h_star_measure(const BorelSet& set) const {
  double total = 0.0;
  for (const auto& iv : set.intervals()) total += h_star_cdf(iv.upper) - h_star_cdf(iv.lower);
  return total;
}

double PosteriorParams::sample_h_star(RngStream& rng) const {
  const double pick = rng.uniform();
  const double u = rng.uniform();
  if (data_.empty() || pick < prior_weight()) return base_.quantile(u);
  const auto n = data_.size();
  const auto idx = std::min(static_cast<std::size_t>(u * static_cast<double>(n)), n - 1);
  return data_[idx];
}

PosteriorParams posterior_update(double a, const BaseMeasure& base, std::vector<double> data) {
  return PosteriorParams(a, base, std::move(data));
}

DpSample stick_breaking_sample(const PosteriorParams& posterior, const TruncationPolicy& trunc,
                               RngStream& rng) {
  return stick_breaking_sample(
      posterior.a_star(), [&posterior](RngStream& r) { return posterior.sample_h_star(r); }, trunc,
      rng);
}

}  // namespace dplab
