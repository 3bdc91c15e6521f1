#pragma once

#include <stdexcept>
#include <string>

namespace bsfp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax, wrong field types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Placing a module would intersect the interior of an already placed one.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// A metric that needs at least one placed module was asked of an empty state.
class EmptyStateError : public Error {
 public:
  using Error::Error;
};

class IncompletePlacementError : public Error {
 public:
  using Error::Error;
};

/// Action does not place the module the episode expects next.
class SequenceError : public Error {
 public:
  using Error::Error;
};

/// Every rollout of the search ended on a constraint violation.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsfp
