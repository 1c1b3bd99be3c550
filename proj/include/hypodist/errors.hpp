#pragma once

#include <stdexcept>
#include <string>

namespace hypodist {

/// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A point was evaluated outside the rectangular domain.
class OutOfDomain : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A function carries no usable probability mass.
class DegenerateFunction : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The shape constraints of an estimation problem admit no feasible function.
class ShapeInfeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The LP solver stopped at its iteration limit.
class IterationLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hypodist
