#pragma once

#include <stdexcept>
#include <string>

namespace zenolab {

/// Operands live on different spaces (grid or dense dimension mismatch).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the admissible domain (margins, supports, grid straddling).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structural validation failure, e.g. a non-Hermitian matrix.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation's precondition (non-normalized or non-core state).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace zenolab
