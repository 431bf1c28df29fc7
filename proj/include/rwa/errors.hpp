#pragma once

#include <stdexcept>
#include <string>

namespace rwa {

/// Bad input: out-of-range index, malformed control, unreadable file.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The averaging hypotheses do not hold for the requested transition.
/// what() carries the full human-readable checker report.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigensolver failure or a violated numerical postcondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rwa
