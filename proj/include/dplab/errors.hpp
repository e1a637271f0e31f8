#pragma once

#include <stdexcept>
#include <string>

namespace dplab {

/// Distribution or sampler parameter outside its domain (non-positive shape, bad alphas).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cells passed as a partition overlap or do not cover the support.
class InvalidPartition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidTruncation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Function argument outside the documented domain (quantile level, grid range, ordering).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The base density vanishes where a quantile covariance needs to divide by it.
class SingularDensity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace dplab
