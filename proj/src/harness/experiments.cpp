#include <algorithm>
#include <chrono>
#include <cmath>

#include "dplab/errors.hpp"
#include "dplab/harness.hpp"

namespace dplab {
namespace {

std::vector<BorelSet> default_sets(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFidi:
      return {BorelSet::interval(0.0, 0.25), BorelSet::interval(0.25, 0.5),
              BorelSet::interval(0.5, 1.0)};
    case ExperimentKind::kPosterior:
      return {BorelSet::interval(0.0, 0.3), BorelSet::interval(0.3, 0.5),
              BorelSet::interval(0.5, 1.0)};
    default:
      return {BorelSet::interval(0.0, 0.3), BorelSet::interval(0.3, 0.5)};
  }
}

std::size_t default_replications(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMoments:
    case ExperimentKind::kModulus:
      return 100000;
    case ExperimentKind::kGc:
      return 1000;
    default:
      return 10000;
  }
}

double default_a(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kFidi:
      return 1e4;
    case ExperimentKind::kModulus:
      return 1.0;
    case ExperimentKind::kPosterior:
      return 2.0;
    default:
      return 10.0;
  }
}

std::vector<double> default_a_values(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kQuantile:
      return {1e4};
    case ExperimentKind::kDensity:
      return {1e2, 1e3, 1e4};
    default:
      return {10.0, 1e2, 1e3, 1e4};
  }
}

ExperimentResult run_one(ExperimentKind kind, const ExperimentConfig& c) {
  const BaseMeasure base(c.base_measure.value_or(UniformFamily{}));
  const std::size_t reps = c.replications.value_or(default_replications(kind));
  const double a = c.a.value_or(default_a(kind));
  const auto a_values = c.a_values.value_or(default_a_values(kind));
  const auto sets = c.sets.value_or(default_sets(kind));

  switch (kind) {
    case ExperimentKind::kMoments:
      return {kind, moment_check(a, base, sets, reps, c.seed, c.tolerances)};
    case ExperimentKind::kFidi:
      return {kind, fidi_normality_check(a, base, sets, reps, c.seed, c.tolerances)};
    case ExperimentKind::kModulus: {
      const auto t = c.t_points.value_or(std::vector<double>{0.1, 0.4, 0.9});
      return {kind, modulus_check(a, t[0], t[1], t[2], reps, c.seed, c.tolerances)};
    }
    case ExperimentKind::kGc: {
      GcResult r{gc_study(a_values, base, reps, c.seed, c.truncation), {}};
      r.checks = gc_checks(r.curve, c.rate_lower, c.rate_upper);
      return {kind, std::move(r)};
    }
    case ExperimentKind::kQuantile: {
      const auto u = c.u_points.value_or(std::vector<double>{0.25, 0.5, 0.75});
      return {kind, quantile_limit_study(a_values, base, u, reps, c.seed, c.tolerances,
                                         c.quantile_sampler, c.truncation)};
    }
    case ExperimentKind::kDensity: {
      const auto g = c.grid.value_or(GridSpec{});
      return {kind, density_convergence_study(c.l1.value_or(1.0 / 3.0), c.l2.value_or(1.0 / 3.0),
                                              a_values, Grid::uniform(g.lower, g.upper, g.points),
                                              c.quadrature, c.density_tolerance)};
    }
    case ExperimentKind::kPosterior: {
      auto data = c.data.value_or(std::vector<double>{0.2, 0.4, 0.6});
      return {kind,
              posterior_check(a, base, std::move(data), sets, reps, c.seed, c.tolerances, c.truncation)};
    }
    case ExperimentKind::kAll:
      break;
  }
  throw InvalidArgument("'all' is not a single experiment");
}

}  // namespace

bool ExperimentResult::pass() const {
  return std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GcResult>) {
          return std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
        } else {
          return r.pass();
        }
      },
      outcome);
}

bool RunReport::pass() const {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
}

RunReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config_echo = to_json(config);
  if (config.experiment == ExperimentKind::kAll) {
    for (auto kind : experiment_families()) report.results.push_back(run_one(kind, config));
  } else {
    report.results.push_back(run_one(config.experiment, config));
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dplab
