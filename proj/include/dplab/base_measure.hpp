#pragma once

#include <string>
#include <utility>
#include <variant>

#include "dplab/borel_set.hpp"
#include "dplab/rng.hpp"

namespace dplab {

struct UniformFamily {
  double lower = 0.0;
  double upper = 1.0;
};
struct ExponentialFamily {
  double rate = 1.0;
};
struct NormalFamily {
  double mu = 0.0;
  double sigma = 1.0;
};

using BaseFamily = std::variant<UniformFamily, ExponentialFamily, NormalFamily>;

/// Continuous base distribution H on the real line: the centre of a DP.
class BaseMeasure {
 public:
  explicit BaseMeasure(BaseFamily family);

  static BaseMeasure uniform(double lower = 0.0, double upper = 1.0);
  static BaseMeasure exponential(double rate = 1.0);
  static BaseMeasure normal(double mu = 0.0, double sigma = 1.0);

  [[nodiscard]] double cdf(double x) const;
  /// Left-continuous inverse on (0, 1).
  [[nodiscard]] double quantile(double u) const;
  [[nodiscard]] double density(double x) const;
  /// H(S) for a finite union of half-open intervals.
  [[nodiscard]] double measure(const BorelSet& set) const;
  [[nodiscard]] double measure(const Interval& iv) const { return cdf(iv.upper) - cdf(iv.lower); }

  [[nodiscard]] std::pair<double, double> support() const;
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const BaseFamily& family() const { return family_; }

  double sample(RngStream& rng) const { return quantile(rng.uniform()); }

 private:
  BaseFamily family_;
  std::string label_;
};

}  // namespace dplab
