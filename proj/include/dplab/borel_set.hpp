#pragma once

#include <span>
#include <vector>

namespace dplab {

/// Half-open interval (lower, upper]. Either end may be infinite.
struct Interval {
  double lower;
  double upper;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint half-open intervals, kept sorted.
/// Intervals that touch are merged, so the representation is canonical.
class BorelSet {
 public:
  BorelSet() = default;
  explicit BorelSet(std::vector<Interval> intervals);

  static BorelSet interval(double lower, double upper);
  /// (-inf, t]
  static BorelSet half_line(double t);
  static BorelSet real_line();

  [[nodiscard]] std::span<const Interval> intervals() const { return intervals_; }
  [[nodiscard]] bool empty() const { return intervals_.empty(); }
  [[nodiscard]] bool contains(double x) const;

  [[nodiscard]] BorelSet intersect(const BorelSet& other) const;

  friend bool operator==(const BorelSet&, const BorelSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Elementary cells generated by all endpoints of `sets`, covering the real
/// line, in increasing order. Every input set is a union of these cells.
std::vector<Interval> common_refinement(std::span<const BorelSet> sets);

}  // namespace dplab
