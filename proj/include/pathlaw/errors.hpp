#pragma once

#include <stdexcept>

namespace pathlaw {

// Invalid run configuration: bad grid sizes, unknown experiment ids, ...
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// An exponential would exceed double range; the message names the node.
struct OverflowError : std::range_error {
  using std::range_error::range_error;
};

}  // namespace pathlaw
