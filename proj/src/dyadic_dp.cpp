#include "dplab/dyadic_dp.hpp"

#include <cmath>
#include <string>

#include "dplab/errors.hpp"
#include "dplab/variates.hpp"

namespace dplab {

DyadicDp::DyadicDp(double a, RngStream rng, int max_depth)
    : a_(a), rng_(rng), max_depth_(max_depth) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidParameter("concentration must be positive");
  if (max_depth < 1 || max_depth > 60) throw InvalidArgument("max_depth must lie in [1, 60]");
  nodes_.push_back({1.0});
}

std::int32_t DyadicDp::children(std::int32_t node, int depth, std::uint64_t index) {
  if (nodes_[node].left >= 0) return nodes_[node].left;
  const double half_shape = std::ldexp(a_, -(depth + 1));
  RngStream split_rng = rng_.substream(static_cast<std::uint64_t>(depth), index);
  const double share = sample_beta(half_shape, half_shape, split_rng);
  const double mass = nodes_[node].mass;
  const double left_mass = mass * share;
  const auto left = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({left_mass});
  nodes_.push_back({mass - left_mass});
  nodes_[node].left = left;
  return left;
}

double DyadicDp::quantile(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw InvalidArgument("quantile level must lie in (0,1]");
  std::int32_t node = 0;
  std::uint64_t index = 0;
  double below = 0.0;
  for (int depth = 0; depth < max_depth_; ++depth) {
    const std::int32_t left = children(node, depth, index);
    const double left_mass = nodes_[left].mass;
    index <<= 1;
    if (below + left_mass >= u) {
      node = left;
    } else {
      below += left_mass;
      node = left + 1;
      index |= 1;
    }
  }
  return std::ldexp(static_cast<double>(index) + 0.5, -max_depth_);
}

double DyadicDp::cell_mass(int depth, std::uint64_t index) {
  if (depth < 0 || depth > max_depth_ || (depth < 64 && (index >> depth) != 0)) {
    throw InvalidArgument("dyadic cell (" + std::to_string(depth) + ", " + std::to_string(index) +
                          ") out of range");
  }
  std::int32_t node = 0;
  for (int d = 0; d < depth; ++d) {
    const std::int32_t left = children(node, d, index >> (depth - d));
    const bool go_right = (index >> (depth - d - 1)) & 1U;
    node = left + (go_right ? 1 : 0);
  }
  return nodes_[node].mass;
}

}  // namespace dplab
