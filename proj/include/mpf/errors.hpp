#pragma once

#include <stdexcept>
#include <string>

namespace mpf {

/// Input violates a domain invariant (bad dataset, bad config, bad spec).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input could not be parsed at all; the message names the offending field.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failure while running a predictor or a pipeline stage.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpf
