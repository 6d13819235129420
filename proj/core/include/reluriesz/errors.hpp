#pragma once

#include <stdexcept>

namespace reluriesz {

// Argument outside the mathematical domain of an operation (non-finite
// input, smoothness outside [0,1), n = 0 for the Mobius function, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Caller violated a precondition that is not a domain issue (duplicate ids,
// too few samples, empty support where one is required).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested materialization would exceed the configured cap.
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace reluriesz
