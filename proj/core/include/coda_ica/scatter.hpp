#pragma once

// Second and fourth order moment statistics. All expectations are row means
// (divisor n).

#include <coda_ica/types.hpp>

#include <span>
#include <utility>
#include <vector>

namespace coda_ica {

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order and each eigenvector's largest-magnitude entry positive.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;  // columns
};

SymmetricEigen symmetric_eigen(const Matrix& M);

/// Symmetric inverse square root M^{-1/2}. Throws SingularCovariance if M
/// is not numerically positive definite (smallest/largest ratio <= rel_tol).
Matrix inverse_sqrt_symmetric(const Matrix& M, double rel_tol = 1e-12);

Vector column_means(const Matrix& X);
Matrix covariance(const Matrix& X);

struct WhitenedData {
  Matrix X_st;
  Vector mean;
  Matrix cov_inv_sqrt;
  Matrix cov;
};

/// x_st = cov^{-1/2} (x - mean) for every row, using the symmetric root.
WhitenedData whiten(const Matrix& X);

/// Scatter matrix of fourth moments:
/// (1/(p+2)) * mean_t[ r_t * y_t y_t' ], y_t = x_t - mean, r_t = y_t' cov^{-1} y_t.
Matrix cov4(const Matrix& X);

/// Fourth order cumulant matrix of whitened data:
/// mean_t[(x_t' E_ij x_t) x_t x_t'] - E_ij - E_ij' - tr(E_ij) I,  E_ij = e_i e_j'.
/// Indices are 0-based.
struct CumulantMatrix {
  Index i = 0;
  Index j = 0;
  Matrix C;
};

CumulantMatrix cumulant_matrix(const Matrix& X_st, Index i, Index j);

/// All requested cumulant matrices accumulated in one pass over the rows.
/// Agrees with repeated cumulant_matrix() calls within rounding.
std::vector<CumulantMatrix> cumulant_matrices(const Matrix& X_st,
                                              std::span<const std::pair<Index, Index>> pairs);

/// (i, j) pairs with |i - j| < k, in row-major order. k >= p gives all p^2.
std::vector<std::pair<Index, Index>> band_pairs(Index p, Index k);

/// Sample excess kurtosis m4/m2^2 - 3 per column (divisor n).
Vector excess_kurtosis(const Matrix& Z);
/// Sample skewness m3/m2^{3/2} per column (divisor n).
Vector skewness(const Matrix& Z);

}  // namespace coda_ica
