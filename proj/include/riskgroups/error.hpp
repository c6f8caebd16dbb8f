#pragma once

#include <stdexcept>
#include <string>

namespace riskgroups {

// Caller violated a precondition (mismatched vocabularies, bad config values).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data failed validation (malformed CSV rows, unknown codes).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every design column was rejected by the rank check.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A chain iteration could not be completed (nonfinite energy, exhausted proposal retries).
class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riskgroups
