#pragma once

#include <stdexcept>
#include <string>

namespace minkowski {

/// Base class of every error thrown by the library. Messages name the
/// operation and the offending parameter.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument (range, size, empty input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A structural condition on a system failed (coordinate ordering,
/// neat projection, non-overlapping, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured size budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace minkowski
