#ifndef RELAYCAST_ERRORS_HPP
#define RELAYCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relaycast {

/// Bad input: out-of-range ids, violated preconditions, malformed files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction that should have succeeded did not (rejection budget,
/// failed post-construction assertion).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or unsatisfiable run configuration.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace relaycast

#endif  // RELAYCAST_ERRORS_HPP
