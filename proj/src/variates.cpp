#include "dplab/variates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dplab/errors.hpp"

namespace dplab {
namespace {

void require_shape(double shape, const char* what) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidParameter(std::string(what) + " must be positive and finite, got " +
                           std::to_string(shape));
  }
}

// Marsaglia & Tsang (2000), shape >= 1.
double marsaglia_tsang(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

DirichletParams::DirichletParams(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.size() < 2) throw InvalidParameter("Dirichlet needs at least two parameters");
  for (double a : alphas_) {
    require_shape(a, "Dirichlet parameter");
    total_ += a;
  }
}

double sample_gamma(double shape, RngStream& rng) {
  require_shape(shape, "gamma shape");
  if (shape == 1.0) return -std::log(rng.uniform());
  if (shape > 1.0) return marsaglia_tsang(shape, rng);
  return std::exp(sample_log_gamma(shape, rng));
}

double sample_log_gamma(double shape, RngStream& rng) {
  require_shape(shape, "gamma shape");
  if (shape == 1.0) return std::log(-std::log(rng.uniform()));
  if (shape > 1.0) return std::log(marsaglia_tsang(shape, rng));
  // G(shape) = G(shape + 1) * U^{1/shape}
  const double boosted = marsaglia_tsang(shape + 1.0, rng);
  return std::log(boosted) + std::log(rng.uniform()) / shape;
}

double sample_beta(double alpha, double beta, RngStream& rng) {
  require_shape(alpha, "beta alpha");
  require_shape(beta, "beta beta");
  const double la = sample_log_gamma(alpha, rng);
  const double lb = sample_log_gamma(beta, rng);
  // G1 / (G1 + G2) = 1 / (1 + exp(lb - la))
  const double diff = lb - la;
  if (diff > 0.0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

std::vector<double> sample_dirichlet(const DirichletParams& params, RngStream& rng) {
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample_log_gamma(params.alphas()[i], rng);
  const double top = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

double log_dirichlet_density(std::span<const double> y, const DirichletParams& params) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (y.size() != params.size()) {
    throw InvalidArgument("point has " + std::to_string(y.size()) + " coordinates, expected " +
                          std::to_string(params.size()));
  }
  double sum = 0.0;
  for (double v : y) {
    if (!(v >= 0.0) || v > 1.0) return kNegInf;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) return kNegInf;

  double log_f = std::lgamma(params.total());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = params.alphas()[i];
    log_f -= std::lgamma(a);
    if (a != 1.0) log_f += (a - 1.0) * std::log(y[i]);
  }
  return log_f;
}

double dirichlet_density(std::span<const double> y, const DirichletParams& params) {
  return std::exp(log_dirichlet_density(y, params));
}

}  // namespace dplab
