#include "dplab/base_measure.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dplab/errors.hpp"

namespace dplab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string make_label(const BaseFamily& family) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const UniformFamily& f) { out << "uniform(" << f.lower << "," << f.upper << ")"; },
                 [&](const ExponentialFamily& f) { out << "exponential(" << f.rate << ")"; },
                 [&](const NormalFamily& f) { out << "normal(" << f.mu << "," << f.sigma << ")"; },
             },
             family);
  return out.str();
}

void validate(const BaseFamily& family) {
  std::visit(Overloaded{
                 [](const UniformFamily& f) {
                   if (!(std::isfinite(f.lower) && std::isfinite(f.upper) && f.lower < f.upper))
                     throw InvalidParameter("uniform base needs finite lower < upper");
                 },
                 [](const ExponentialFamily& f) {
                   if (!(f.rate > 0.0 && std::isfinite(f.rate)))
                     throw InvalidParameter("exponential rate must be positive");
                 },
                 [](const NormalFamily& f) {
                   if (!(std::isfinite(f.mu) && f.sigma > 0.0 && std::isfinite(f.sigma)))
                     throw InvalidParameter("normal base needs finite mu and sigma > 0");
                 },
             },
             family);
}

}  // namespace

BaseMeasure::BaseMeasure(BaseFamily family) : family_(family) {
  validate(family_);
  label_ = make_label(family_);
}

BaseMeasure BaseMeasure::uniform(double lower, double upper) {
  return BaseMeasure(UniformFamily{lower, upper});
}
BaseMeasure BaseMeasure::exponential(double rate) { return BaseMeasure(ExponentialFamily{rate}); }
BaseMeasure BaseMeasure::normal(double mu, double sigma) {
  return BaseMeasure(NormalFamily{mu, sigma});
}

double BaseMeasure::cdf(double x) const {
  return std::visit(Overloaded{
                        [x](const UniformFamily& f) {
                          if (x <= f.lower) return 0.0;
                          if (x >= f.upper) return 1.0;
                          return (x - f.lower) / (f.upper - f.lower);
                        },
                        [x](const ExponentialFamily& f) {
                          return x <= 0.0 ? 0.0 : -std::expm1(-f.rate * x);
                        },
                        [x](const NormalFamily& f) {
                          return 0.5 * std::erfc(-(x - f.mu) / (f.sigma * std::numbers::sqrt2));
                        },
                    },
                    family_);
}

double BaseMeasure::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("base quantile level must lie in (0,1)");
  return std::visit(Overloaded{
                        [u](const UniformFamily& f) { return f.lower + u * (f.upper - f.lower); },
                        [u](const ExponentialFamily& f) { return -std::log1p(-u) / f.rate; },
                        [u](const NormalFamily& f) {
                          return f.mu - f.sigma * std::numbers::sqrt2 *
                                            boost::math::erfc_inv(2.0 * u);
                        },
                    },
                    family_);
}

double BaseMeasure::density(double x) const {
  return std::visit(Overloaded{
                        [x](const UniformFamily& f) {
                          return (x > f.lower && x <= f.upper) ? 1.0 / (f.upper - f.lower) : 0.0;
                        },
                        [x](const ExponentialFamily& f) {
                          return x < 0.0 ? 0.0 : f.rate * std::exp(-f.rate * x);
                        },
                        [x](const NormalFamily& f) {
                          const double z = (x - f.mu) / f.sigma;
                          return std::exp(-0.5 * z * z) /
                                 (f.sigma * std::sqrt(2.0 * std::numbers::pi));
                        },
                    },
                    family_);
}

double BaseMeasure::measure(const BorelSet& set) const {
  double total = 0.0;
  for (const auto& iv : set.intervals()) total += measure(iv);
  return total;
}

std::pair<double, double> BaseMeasure::support() const {
  return std::visit(Overloaded{
                        [](const UniformFamily& f) { return std::pair{f.lower, f.upper}; },
                        [](const ExponentialFamily&) { return std::pair{0.0, kInf}; },
                        [](const NormalFamily&) { return std::pair{-kInf, kInf}; },
                    },
                    family_);
}

}  // namespace dplab
