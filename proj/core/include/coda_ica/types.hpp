#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace coda_ica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

// Error hierarchy. Everything thrown by the library derives from Error so
// callers (the CLI in particular) can map families to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain: non-positive parts, bad indices,
/// mismatched shapes, invalid options.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures (singular scatter, non-convergence, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularCovariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionCap : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CriterionUndefined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSample : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Thrown by iterative routines that exhausted their budget. The partial
/// state is reported through the message; routines with a structured
/// partial result derive their own type (see JointDiagError).
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace coda_ica
