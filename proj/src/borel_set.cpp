#include "dplab/borel_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dplab/errors.hpp"

namespace dplab {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BorelSet::BorelSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lower) || std::isnan(iv.upper) || !(iv.lower < iv.upper)) {
      throw InvalidArgument("interval (" + std::to_string(iv.lower) + ", " +
                            std::to_string(iv.upper) + "] is empty or malformed");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.lower < y.lower; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lower < intervals_.back().upper) {
      throw InvalidArgument("intervals of a Borel set must be disjoint");
    }
    if (!intervals_.empty() && iv.lower == intervals_.back().upper) {
      intervals_.back().upper = iv.upper;
    } else {
      intervals_.push_back(iv);
    }
  }
}

BorelSet BorelSet::interval(double lower, double upper) { return BorelSet({{lower, upper}}); }

BorelSet BorelSet::half_line(double t) { return BorelSet({{-kInf, t}}); }

BorelSet BorelSet::real_line() { return BorelSet({{-kInf, kInf}}); }

bool BorelSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lower < x && x <= iv.upper; });
}

BorelSet BorelSet::intersect(const BorelSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < intervals_.size() && j < other.intervals_.size()) {
    const auto& x = intervals_[i];
    const auto& y = other.intervals_[j];
    const double lo = std::max(x.lower, y.lower);
    const double hi = std::min(x.upper, y.upper);
    if (lo < hi) out.push_back({lo, hi});
    if (x.upper < y.upper) {
      ++i;
    } else {
      ++j;
    }
  }
  BorelSet result;
  result.intervals_ = std::move(out);
  return result;
}

std::vector<Interval> common_refinement(std::span<const BorelSet> sets) {
  std::vector<double> cuts;
  for (const auto& s : sets) {
    for (const auto& iv : s.intervals()) {
      if (std::isfinite(iv.lower)) cuts.push_back(iv.lower);
      if (std::isfinite(iv.upper)) cuts.push_back(iv.upper);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> cells;
  double lower = -kInf;
  for (double c : cuts) {
    cells.push_back({lower, c});
    lower = c;
  }
  cells.push_back({lower, kInf});
  return cells;
}

}  // namespace dplab
