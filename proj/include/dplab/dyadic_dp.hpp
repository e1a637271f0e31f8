#pragma once

#include <cstdint>
#include <vector>

#include "dplab/rng.hpp"

namespace dplab {

/// DP(a, uniform[0,1]) realized lazily on dyadic cells.
///
/// By the partition definition, the masses of the 2^d dyadic cells of depth d
/// are Dirichlet(a 2^-d, ..., a 2^-d). Conditional on a cell's mass, the share
/// of its left half is Beta(a 2^-(d+1), a 2^-(d+1)) and independent of
/// everything above, so cells can be split on demand. Each split draws from a
/// substream keyed by (depth, index), so the realization does not depend on
/// the order of queries.
///
/// quantile() locates P^{-1}(u) to within half a cell at `max_depth`.
/// For a general continuous base H, P_a^{-1}(u) = H^{-1}(quantile(u)).
class DyadicDp {
 public:
  DyadicDp(double a, RngStream rng, int max_depth = 48);

  /// inf{v : P([0, v]) >= u}, u in (0, 1]; accurate to 2^-(max_depth+1).
  double quantile(double u);
  /// P((k 2^-depth, (k+1) 2^-depth]), refining as needed.
  double cell_mass(int depth, std::uint64_t index);

  [[nodiscard]] double concentration() const { return a_; }
  [[nodiscard]] int max_depth() const { return max_depth_; }

 private:
  struct Node {
    double mass;
    std::int32_t left = -1;  // right child is left + 1
  };

  std::int32_t children(std::int32_t node, int depth, std::uint64_t index);

  double a_;
  RngStream rng_;
  int max_depth_;
  std::vector<Node> nodes_;
};

}  // namespace dplab
