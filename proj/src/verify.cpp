#include "dplab/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dplab/dyadic_dp.hpp"
#include "dplab/errors.hpp"
#include "dplab/parallel.hpp"

namespace dplab {
namespace {

// A point inside an elementary right-closed cell.
double representative(const Interval& cell) {
  if (std::isfinite(cell.upper)) return cell.upper;
  if (std::isfinite(cell.lower)) return cell.lower + 1.0;
  return 0.0;
}

// membership[s][c]: cell c lies inside set s.
std::vector<std::vector<bool>> cell_membership(std::span<const BorelSet> sets,
                                               std::span<const Interval> cells) {
  std::vector<std::vector<bool>> out(sets.size(), std::vector<bool>(cells.size()));
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t c = 0; c < cells.size(); ++c) out[s][c] = sets[s].contains(representative(cells[c]));
  }
  return out;
}

// values[s][r] = P_a(sets[s]) in replication r, from Dirichlet draws over the
// common refinement (streams offset .. offset + R).
std::vector<std::vector<double>> fidi_set_masses(double a, const BaseMeasure& base,
                                                 std::span<const BorelSet> sets,
                                                 std::size_t replications, std::uint64_t seed,
                                                 std::uint64_t stream_offset) {
  const auto cells = common_refinement(sets);
  const auto member = cell_membership(sets, cells);
  std::vector<std::vector<double>> values(sets.size(), std::vector<double>(replications));
  parallel_for(replications, [&](std::size_t r) {
    RngStream rng(seed, stream_offset + r);
    const auto draw = sample_fidi(a, base, std::span<const Interval>(cells), rng);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      double mass = 0.0;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (member[s][c]) mass += draw[c];
      }
      values[s][r] = mass;
    }
  });
  return values;
}

std::vector<std::vector<double>> stick_set_masses(const AtomSampler& draw_atom, double a,
                                                  std::span<const BorelSet> sets,
                                                  std::size_t replications, std::uint64_t seed,
                                                  std::uint64_t stream_offset,
                                                  const TruncationPolicy& trunc) {
  std::vector<std::vector<double>> values(sets.size(), std::vector<double>(replications));
  parallel_for(replications, [&](std::size_t r) {
    RngStream rng(seed, stream_offset + r);
    const auto sample = stick_breaking_sample(a, draw_atom, trunc, rng);
    for (std::size_t s = 0; s < sets.size(); ++s) values[s][r] = dp_measure(sample, sets[s]);
  });
  return values;
}

std::vector<double> products(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

void require_replications(std::size_t replications) {
  if (replications < 2) throw InvalidArgument("need at least two replications");
}

// Mean, variance and cross-moment comparisons of set masses against closed forms.
void add_moment_comparisons(McSummary& out, const std::string& prefix, double a,
                            const BaseMeasure& base, std::span<const BorelSet> sets,
                            const std::vector<std::vector<double>>& values, double mean_tol,
                            double moment_tol) {
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto m = dp_moments(a, base, sets[s]);
    out.add(fmt::format("{}mean[{}]", prefix, s), mean_estimate(values[s]), m.mean, mean_tol);
    out.add(fmt::format("{}var[{}]", prefix, s), variance_estimate(values[s]), m.variance,
            moment_tol);
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      out.add(fmt::format("{}cross[{},{}]", prefix, i, j),
              mean_estimate(products(values[i], values[j])),
              dp_cross_moment(a, base, sets[i], sets[j]), moment_tol);
    }
  }
}

}  // namespace

bool Comparison::evaluate() const {
  const double slack = tolerance_se * se;
  if (kind == Kind::kUpperBound) return estimate <= target + slack;
  return std::abs(estimate - target) <= slack;
}

Comparison make_comparison(std::string name, Estimate est, double target, double tolerance_se,
                           Comparison::Kind kind) {
  Comparison c{std::move(name), est.value, est.se, target, tolerance_se, kind, false};
  c.pass = c.evaluate();
  return c;
}

bool McSummary::pass() const {
  return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.pass; }) &&
         std::all_of(ks_checks.begin(), ks_checks.end(), [](const auto& k) { return k.pass; }) &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

void McSummary::add(std::string name, Estimate est, double target, double tolerance_se,
                    Comparison::Kind kind) {
  estimates.push_back({name, est});
  comparisons.push_back(make_comparison(std::move(name), est, target, tolerance_se, kind));
}

void McSummary::add_ks(std::string name, KsResult result, double level) {
  ks_checks.push_back({std::move(name), result.statistic, result.p_value, level,
                       result.p_value > level});
}

void McSummary::add_check(std::string name, double observed, double expected, bool pass) {
  checks.push_back({std::move(name), observed, expected, pass});
}

McSummary moment_check(double a, const BaseMeasure& base, std::span<const BorelSet> sets,
                       std::size_t replications, std::uint64_t seed, const Tolerances& tol,
                       DpSampler sampler, const TruncationPolicy& trunc) {
  require_replications(replications);
  const auto values =
      sampler == DpSampler::kFidi
          ? fidi_set_masses(a, base, sets, replications, seed, 0)
          : stick_set_masses([&base](RngStream& r) { return base.sample(r); }, a, sets,
                             replications, seed, 0, trunc);
  McSummary out;
  out.experiment = "moments";
  out.replications = replications;
  out.seed_info = {seed, 0, replications - 1};
  add_moment_comparisons(out, "", a, base, sets, values, tol.mean_se, tol.moment_se);
  return out;
}

McSummary modulus_check(double a, double t1, double t, double t2, std::size_t replications,
                        std::uint64_t seed, const Tolerances& tol) {
  require_replications(replications);
  if (!(0.0 <= t1 && t1 <= t && t <= t2 && t2 <= 1.0)) {
    throw InvalidArgument("modulus check needs 0 <= t1 <= t <= t2 <= 1");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::vector<Interval> cells{{-kInf, t1}, {t1, t}, {t, t2}, {t2, kInf}};
  const auto base = BaseMeasure::uniform();
  std::vector<double> prod(replications);
  parallel_for(replications, [&](std::size_t r) {
    RngStream rng(seed, r);
    const auto draw = sample_fidi(a, base, std::span<const Interval>(cells), rng);
    prod[r] = draw[1] * draw[2];
  });

  McSummary out;
  out.experiment = "modulus";
  out.replications = replications;
  out.seed_info = {seed, 0, replications - 1};
  const auto est = mean_estimate(prod);
  const double factor = a / (a + 1.0);
  out.add("increment_product", est, factor * (t - t1) * (t2 - t), tol.moment_se);
  out.comparisons.push_back(make_comparison("increment_product_bound", est,
                                            factor * (t2 - t1) * (t2 - t1), tol.moment_se,
                                            Comparison::Kind::kUpperBound));
  return out;
}

McSummary fidi_normality_check(double a, const BaseMeasure& base, std::span<const BorelSet> sets,
                               std::size_t replications, std::uint64_t seed,
                               const Tolerances& tol) {
  require_replications(replications);
  auto values = fidi_set_masses(a, base, sets, replications, seed, 0);
  const double root_a = std::sqrt(a);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const double h = base.measure(sets[s]);
    for (double& v : values[s]) v = root_a * (v - h);
  }

  McSummary out;
  out.experiment = "fidi";
  out.replications = replications;
  out.seed_info = {seed, 0, replications - 1};
  for (std::size_t s = 0; s < sets.size(); ++s) {
    out.add(fmt::format("mean[{}]", s), mean_estimate(values[s]), 0.0, tol.moment_se);
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      out.add(fmt::format("cov[{},{}]", i, j), covariance_estimate(values[i], values[j]),
              bb_cov(sets[i], sets[j], base), tol.moment_se);
    }
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const double limit_var = bb_cov(sets[s], sets[s], base);
    if (!(limit_var > 0.0)) continue;
    const double sd = std::sqrt(limit_var);
    std::vector<double> z(values[s].size());
    for (std::size_t r = 0; r < z.size(); ++r) z[r] = values[s][r] / sd;
    out.add_ks(fmt::format("ks_normal[{}]", s), ks_one_sample(z, standard_normal_cdf),
               tol.ks_level);
  }
  return out;
}

McSummary representation_check(double a, const BaseMeasure& base,
                               std::span<const BorelSet> partition, std::size_t replications,
                               std::uint64_t seed, const Tolerances& tol,
                               const TruncationPolicy& trunc) {
  require_replications(replications);
  const auto stick = stick_set_masses([&base](RngStream& r) { return base.sample(r); }, a,
                                      partition, replications, seed, 0, trunc);
  // Dirichlet draws straight over the given cells.
  std::vector<std::vector<double>> fidi(partition.size(), std::vector<double>(replications));
  parallel_for(replications, [&](std::size_t r) {
    RngStream rng(seed, replications + r);
    const auto draw = sample_fidi(a, base, partition, rng);
    for (std::size_t s = 0; s < partition.size(); ++s) fidi[s][r] = draw[s];
  });

  McSummary out;
  out.experiment = "representation";
  out.replications = replications;
  out.seed_info = {seed, 0, 2 * replications - 1};
  add_moment_comparisons(out, "stick.", a, base, partition, stick, tol.moment_se, tol.moment_se);
  add_moment_comparisons(out, "fidi.", a, base, partition, fidi, tol.moment_se, tol.moment_se);
  for (std::size_t s = 0; s < partition.size(); ++s) {
    out.add_ks(fmt::format("ks_two_sample[{}]", s), ks_two_sample(stick[s], fidi[s]),
               tol.ks_level);
  }
  return out;
}

McSummary posterior_check(double a, const BaseMeasure& base, std::vector<double> data,
                          std::span<const BorelSet> sets, std::size_t replications,
                          std::uint64_t seed, const Tolerances& tol,
                          const TruncationPolicy& trunc) {
  require_replications(replications);
  const double n = static_cast<double>(data.size());
  const auto post = posterior_update(a, base, std::move(data));
  const auto values = stick_set_masses(
      [&post](RngStream& r) { return post.sample_h_star(r); }, post.a_star(), sets, replications,
      seed, 0, trunc);

  McSummary out;
  out.experiment = "posterior";
  out.replications = replications;
  out.seed_info = {seed, 0, replications - 1};
  out.add_check("a_star", post.a_star(), a + n, post.a_star() == a + n);
  out.references.push_back({"a_star", post.a_star()});
  for (std::size_t s = 0; s < sets.size(); ++s) {
    out.add(fmt::format("mean[{}]", s), mean_estimate(values[s]), post.h_star_measure(sets[s]),
            tol.moment_se);
  }
  return out;
}

double sup_deviation(const DpSample& sample, const BaseMeasure& base) {
  double sup = sample.truncation_remainder();  // |P(x) - H(x)| as x -> +inf
  double below = 0.0;
  const auto atoms = sample.atoms();
  const auto cum = sample.cumulative();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double h = base.cdf(atoms[i]);
    sup = std::max({sup, std::abs(below - h), std::abs(cum[i] - h)});
    below = cum[i];
  }
  return sup;
}

double cvm_deviation(const DpSample& sample, const BaseMeasure& base) {
  // In v = H(x), P is the step function equal to C_i on [H(x_i), H(x_{i+1})).
  // int_{lo}^{hi} (C - v)^2 dv = ((hi - C)^3 - (lo - C)^3) / 3, factored to avoid cancellation.
  auto piece = [](double c, double lo, double hi) {
    const double p = lo - c, q = hi - c;
    return (q - p) * (q * q + p * q + p * p) / 3.0;
  };
  double total = 0.0, level = 0.0, lo = 0.0;
  const auto atoms = sample.atoms();
  const auto cum = sample.cumulative();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double hi = base.cdf(atoms[i]);
    total += piece(level, lo, hi);
    level = cum[i];
    lo = hi;
  }
  return total + piece(level, lo, 1.0);
}

DlCheck dl_inequality_check(const DpSample& sample, const BaseMeasure& base) {
  const double d = sup_deviation(sample, base);
  const double cvm = cvm_deviation(sample, base);
  const double lhs = d * d * d / 3.0;
  return {d, lhs, cvm, std::pow(d, 1.5) / std::sqrt(3.0), lhs <= cvm + 1e-12};
}

GcCurve gc_study(std::span<const double> a_values, const BaseMeasure& base,
                 std::size_t replications, std::uint64_t seed, const TruncationPolicy& trunc) {
  require_replications(replications);
  if (!std::is_sorted(a_values.begin(), a_values.end()) ||
      std::adjacent_find(a_values.begin(), a_values.end()) != a_values.end()) {
    throw InvalidArgument("a_values must be strictly increasing");
  }
  GcCurve curve;
  curve.a_values.assign(a_values.begin(), a_values.end());
  std::vector<double> log_a, log_sup;
  for (double a : a_values) {
    std::vector<double> sup(replications), cvm(replications);
    std::vector<char> holds(replications), printed_holds(replications);
    parallel_for(replications, [&](std::size_t r) {
      RngStream rng(seed, r);
      const auto sample = stick_breaking_sample(a, base, trunc, rng);
      const auto dl = dl_inequality_check(sample, base);
      sup[r] = dl.sup;
      cvm[r] = dl.rhs;
      holds[r] = dl.holds;
      printed_holds[r] = dl.printed_lhs <= dl.rhs + 1e-12;
    });
    const auto s = mean_estimate(sup);
    const auto c = mean_estimate(cvm);
    curve.mean_sup.push_back(s.value);
    curve.se_sup.push_back(s.se);
    curve.mean_cvm.push_back(c.value);
    curve.se_cvm.push_back(c.se);
    curve.dl_samples += replications;
    curve.dl_violations += static_cast<std::size_t>(std::count(holds.begin(), holds.end(), 0));
    curve.printed_form_violations +=
        static_cast<std::size_t>(std::count(printed_holds.begin(), printed_holds.end(), 0));
    log_a.push_back(std::log(a));
    log_sup.push_back(std::log(s.value));
  }
  if (a_values.size() >= 2) curve.fitted_rate = least_squares_slope(log_a, log_sup);
  return curve;
}

std::vector<Check> gc_checks(const GcCurve& curve, double rate_lower, double rate_upper) {
  std::vector<Check> out;
  bool decreasing = true;
  for (std::size_t i = 1; i < curve.mean_sup.size(); ++i) {
    decreasing = decreasing && curve.mean_sup[i] < curve.mean_sup[i - 1];
  }
  out.push_back({"mean_sup_strictly_decreasing", decreasing ? 1.0 : 0.0, 1.0, decreasing});
  out.push_back({"fitted_rate_in_range", curve.fitted_rate, 0.5 * (rate_lower + rate_upper),
                 curve.fitted_rate >= rate_lower && curve.fitted_rate <= rate_upper});
  out.push_back({"dl_inequality_violations", static_cast<double>(curve.dl_violations), 0.0,
                 curve.dl_violations == 0 && curve.dl_samples > 0});
  return out;
}

double iqr_limit_variance(const BaseMeasure& base) {
  return limit_quantile_cov(0.75, 0.75, base) + limit_quantile_cov(0.25, 0.25, base) -
         2.0 * limit_quantile_cov(0.25, 0.75, base);
}

double iqr_printed_variance(const BaseMeasure& base) {
  const double h1 = base.density(base.quantile(0.25));
  const double h3 = base.density(base.quantile(0.75));
  return 3.0 / (h3 * h3) + 3.0 / (16.0 * h1 * h1) - 2.0 / (h1 * h3);
}

McSummary quantile_limit_study(std::span<const double> a_values, const BaseMeasure& base,
                               std::span<const double> u_points, std::size_t replications,
                               std::uint64_t seed, const Tolerances& tol, QuantileSampler sampler,
                               const TruncationPolicy& trunc) {
  require_replications(replications);
  for (double u : u_points) {
    if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("u_points must lie in (0,1)");
  }
  // Levels needed per replication: u_points, then the quartiles.
  std::vector<double> levels(u_points.begin(), u_points.end());
  const std::size_t q1 = levels.size(), med = q1 + 1, q3 = q1 + 2;
  levels.insert(levels.end(), {0.25, 0.5, 0.75});

  std::vector<double> base_q(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) base_q[k] = base.quantile(levels[k]);
  const double median_target = limit_quantile_cov(0.5, 0.5, base);
  const double iqr_target = iqr_limit_variance(base);

  McSummary out;
  out.experiment = "quantile";
  out.replications = replications;
  out.seed_info = {seed, 0, replications - 1};
  out.references.push_back({"iqr_variance_limit", iqr_target});
  out.references.push_back({"iqr_variance_printed_formula", iqr_printed_variance(base)});

  for (double a : a_values) {
    const double root_a = std::sqrt(a);
    std::vector<std::vector<double>> q(levels.size(), std::vector<double>(replications));
    parallel_for(replications, [&](std::size_t r) {
      RngStream rng(seed, r);
      if (sampler == QuantileSampler::kDyadic) {
        DyadicDp dp(a, rng);
        for (std::size_t k = 0; k < levels.size(); ++k) {
          q[k][r] = root_a * (base.quantile(dp.quantile(levels[k])) - base_q[k]);
        }
      } else {
        const auto sample = stick_breaking_sample(a, base, trunc, rng);
        for (std::size_t k = 0; k < levels.size(); ++k) {
          q[k][r] = root_a * (dp_quantile(sample, levels[k]) - base_q[k]);
        }
      }
    });

    const std::string tag = fmt::format("a={:g}.", a);
    for (std::size_t i = 0; i < u_points.size(); ++i) {
      for (std::size_t j = i; j < u_points.size(); ++j) {
        out.add(fmt::format("{}cov[{:g},{:g}]", tag, u_points[i], u_points[j]),
                covariance_estimate(q[i], q[j]),
                limit_quantile_cov(u_points[i], u_points[j], base), tol.variance_se);
      }
    }
    out.add(tag + "median_variance", variance_estimate(q[med]), median_target, tol.variance_se);
    std::vector<double> iqr(replications);
    for (std::size_t r = 0; r < replications; ++r) iqr[r] = q[q3][r] - q[q1][r];
    const auto iqr_var = variance_estimate(iqr);
    out.add(tag + "iqr_variance", iqr_var, iqr_target, tol.variance_se);
    out.references.push_back({tag + "iqr_variance_z_vs_printed",
                              (iqr_var.value - iqr_printed_variance(base)) / iqr_var.se});

    std::vector<double> z(replications);
    const double sd = std::sqrt(median_target);
    for (std::size_t r = 0; r < replications; ++r) z[r] = q[med][r] / sd;
    out.add_ks(tag + "ks_median_normal", ks_one_sample(z, standard_normal_cdf), tol.ks_level);
  }
  return out;
}

bool DensityStudy::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

DensityStudy density_convergence_study(double l1, double l2, std::span<const double> a_values,
                                       const Grid& grid, const QuadratureSpec& quad,
                                       double tolerance) {
  const auto spec = BivariateGaussianSpec::from_cells(l1, l2);
  DensityStudy study{l1, l2, {}, limit_bivariate_density(0.0, 0.0, spec),
                     1.0 / (2.0 * std::numbers::pi * std::sqrt(spec.determinant())), {}};
  const Box box = limit_box(l1, l2, quad);
  for (double a : a_values) {
    double gap = 0.0;
    for (double y1 : grid.points()) {
      for (double y2 : grid.points()) {
        gap = std::max(gap, std::abs(scaled_bivariate_density(y1, y2, l1, l2, a) -
                                     limit_bivariate_density(y1, y2, spec)));
      }
    }
    const auto tv = tv_distance_bivariate(l1, l2, a, quad);
    const auto integral = integrate_2d(
        [=](double y1, double y2) { return scaled_bivariate_density(y1, y2, l1, l2, a); }, box,
        quad);
    study.rows.push_back({a, gap, tv.value, tv.quad_error, integral.value, integral.error});
  }

  bool tv_decreasing = true, gap_nonincreasing = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    tv_decreasing = tv_decreasing && study.rows[i].tv_distance < study.rows[i - 1].tv_distance;
    gap_nonincreasing =
        gap_nonincreasing && study.rows[i].max_gap <= study.rows[i - 1].max_gap + tolerance;
  }
  study.checks.push_back({"tv_strictly_decreasing", tv_decreasing ? 1.0 : 0.0, 1.0, tv_decreasing});
  study.checks.push_back(
      {"max_gap_nonincreasing", gap_nonincreasing ? 1.0 : 0.0, 1.0, gap_nonincreasing});
  study.checks.push_back({"limit_density_at_origin", study.limit_at_origin,
                          study.limit_at_origin_target,
                          std::abs(study.limit_at_origin - study.limit_at_origin_target) <= 1e-6});
  for (const auto& row : study.rows) {
    study.checks.push_back({fmt::format("scaled_density_integral[a={:g}]", row.a),
                            row.scaled_integral, 1.0,
                            std::abs(row.scaled_integral - 1.0) <= tolerance});
  }
  return study;
}

}  // namespace dplab
