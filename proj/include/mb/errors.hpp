#pragma once

#include <stdexcept>
#include <string>

namespace mb {

// Constraint errors: the input or iterate left the admissible set.
// Solver errors: an iterative method failed to reach its tolerance.
// The CLI maps these to exit codes 2 and 3 respectively.

struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergence : SolverError {
  using SolverError::SolverError;
};
struct NoRoot : SolverError {
  using SolverError::SolverError;
};
struct SolverStall : SolverError {
  using SolverError::SolverError;
};
struct MaxIterations : SolverError {
  using SolverError::SolverError;
};
struct DegenerateGram : SolverError {
  using SolverError::SolverError;
};

struct WindowTooCoarse : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct NoAdmissibleSigma : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct SizeMismatch : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct GridTooCoarse : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct NotEmerging : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct ZeroPiece : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct HypothesisViolated : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct HypothesisFail : ConstraintError {
  using ConstraintError::ConstraintError;
};
struct PreconditionFail : ConstraintError {
  using ConstraintError::ConstraintError;
};

}  // namespace mb
