#pragma once

#include <stdexcept>
#include <string>

namespace ordstat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The joint order-statistic enumeration would exceed its term budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A computed probability left [0,1] by more than the rounding slack, or an
/// iterative method failed to converge.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A model could not be evaluated at run time (e.g. rejection sampling gave up).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not follow the expected schema. `pointer()` is an
/// RFC 6901 JSON pointer to the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace ordstat
