#pragma once

#include <stdexcept>
#include <string>

namespace heatlab {

/// Argument outside the mathematical domain of an operation (negative s, p <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Something that must not happen under the stated hypotheses did happen.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heatlab
