#pragma once

#include <span>
#include <vector>

#include "dplab/rng.hpp"

namespace dplab {

/// Parameters (a_1, ..., a_k) of a Dirichlet distribution; k >= 2, every a_i > 0.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alphas);

  [[nodiscard]] std::span<const double> alphas() const { return alphas_; }
  [[nodiscard]] std::size_t size() const { return alphas_.size(); }
  [[nodiscard]] double total() const { return total_; }

 private:
  std::vector<double> alphas_;
  double total_ = 0.0;
};

/// Gamma(shape, scale = 1). Marsaglia-Tsang squeeze for shape >= 1, the
/// U^{1/shape} boost below 1, and exactly -log(U) for shape == 1.
/// For very small shapes the draw can underflow to 0; use sample_log_gamma there.
double sample_gamma(double shape, RngStream& rng);

/// Logarithm of a Gamma(shape, 1) draw, finite even when the draw itself underflows.
double sample_log_gamma(double shape, RngStream& rng);

/// Beta(alpha, beta) as G1 / (G1 + G2), evaluated from log-gammas.
double sample_beta(double alpha, double beta, RngStream& rng);

/// Dirichlet draw by normalizing independent gammas (in log space).
std::vector<double> sample_dirichlet(const DirichletParams& params, RngStream& rng);

/// Log of the Dirichlet density with respect to Lebesgue measure on the
/// first k-1 coordinates. -inf outside the simplex.
double log_dirichlet_density(std::span<const double> y, const DirichletParams& params);

/// exp(log_dirichlet_density); 0 off the simplex.
double dirichlet_density(std::span<const double> y, const DirichletParams& params);

}  // namespace dplab
