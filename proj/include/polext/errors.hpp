#pragma once

#include <stdexcept>
#include <string>

namespace polext {

// Every failure raised by the library derives from Error, so callers that
// only care about "something went wrong" can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class NotPositiveDefiniteError : public Error { using Error::Error; };
class SingularBasisError : public Error { using Error::Error; };
class StencilError : public Error { using Error::Error; };

class GenerationError : public Error { using Error::Error; };
class DegenerateAxisError : public Error { using Error::Error; };
class SpecError : public Error { using Error::Error; };
class RankError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class CollisionError : public Error { using Error::Error; };
class LoadError : public Error { using Error::Error; };

class BoundaryError : public Error { using Error::Error; };
class PreconditionError : public Error { using Error::Error; };
class SolverError : public Error { using Error::Error; };
class BudgetError : public Error { using Error::Error; };

/// Newton failed inside one chamber. Carries the chamber's sign pattern
/// rendered as a +/- string so the CLI can report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::string pattern)
      : Error(what), pattern_(std::move(pattern)) {}
  const std::string& pattern() const noexcept { return pattern_; }

 private:
  std::string pattern_;
};

class CompletenessError : public Error { using Error::Error; };
class DegreeError : public Error { using Error::Error; };

}  // namespace polext
