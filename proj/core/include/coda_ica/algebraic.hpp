#pragma once

// Moment-based ICA estimators: FOBI, JADE and k-JADE.

#include <coda_ica/jointdiag.hpp>
#include <coda_ica/unmixing.hpp>

namespace coda_ica {

struct AlgebraicOptions {
  JointDiagOptions joint_diag{};
  /// JADE refuses inputs with more variables than this (p^2 cumulant matrices).
  Index jade_dim_cap = 30;
  /// Adjacent cov4 eigenvalues closer than this raise the FOBI warning.
  double eigen_gap_warning = 0.1;
};

/// W = U' cov^{-1/2}, U the eigenvectors of cov4 of the whitened data.
UnmixingResult fobi(const Matrix& X, const AlgebraicOptions& options = {});

/// W = U' cov^{-1/2}, U the joint diagonalizer of all p^2 cumulant matrices.
UnmixingResult jade(const Matrix& X, const AlgebraicOptions& options = {});

/// JADE restricted to cumulant matrices with |i - j| < k, computed on the
/// FOBI-unmixed data (in FOBI eigenvalue order); W = U' W_FOBI.
UnmixingResult k_jade(const Matrix& X, Index k, const AlgebraicOptions& options = {});

}  // namespace coda_ica
