#pragma once

#include <coda_ica/types.hpp>

#include <span>

namespace coda_ica {

struct JointDiagOptions {
  double tol = 1e-8;  // threshold on |sin| of every rotation in a sweep
  int max_sweeps = 100;
};

struct JointDiagResult {
  Matrix U;  // orthogonal, U' M_k U approximately diagonal
  int sweeps = 0;
  bool converged = false;
  double off_criterion = 0.0;  // sum_k sum_{a != b} (U' M_k U)_{ab}^2
  double diag_criterion = 0.0;  // sum_k ||diag(U' M_k U)||^2
};

class JointDiagError : public ConvergenceError {
 public:
  JointDiagError(const std::string& what, JointDiagResult partial)
      : ConvergenceError(what), partial_(std::move(partial)) {}
  const JointDiagResult& partial() const { return partial_; }

 private:
  JointDiagResult partial_;
};

/// Orthogonal approximate joint diagonalization of symmetric matrices by
/// cyclic Jacobi (Givens) sweeps. Each pair (a, b) is rotated by the angle
/// that maximizes sum_k ||diag(U' M_k U)||^2 over that plane.
///
/// Throws JointDiagError (with the partial result) if max_sweeps is reached
/// while some rotation is still above tol.
JointDiagResult joint_diagonalize(std::span<const Matrix> matrices,
                                  const JointDiagOptions& options = {});

/// Sum over matrices of squared diagonal / off-diagonal mass of U' M U.
double diagonal_mass(std::span<const Matrix> matrices, const Matrix& U);
double off_diagonal_mass(std::span<const Matrix> matrices, const Matrix& U);

}  // namespace coda_ica
