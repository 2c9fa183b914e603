#pragma once

#include <coda_ica/types.hpp>

#include <limits>
#include <string>
#include <vector>

namespace coda_ica {

/// Per-component diagnostics, stored in output order.
struct ComponentInfo {
  Index raw_index = 0;  // position in the estimator's own criterion order
  double kurtosis = 0.0;  // sample excess kurtosis of the scores
  double skewness = 0.0;
  std::string nonlinearity;  // FastICA variants only
  double objective = std::numeric_limits<double>::quiet_NaN();  // mean G(z), FastICA only
  double alpha = std::numeric_limits<double>::quiet_NaN();  // adaptive selection criterion
  Index extraction_position = -1;  // deflation order, FastICA deflation variants only
};

struct Diagnostics {
  std::vector<ComponentInfo> components;
  Vector eigenvalues;  // cov4 eigenvalues, descending (FOBI, k-JADE pilot)
  std::vector<std::string> warnings;
  bool a4_warning = false;  // adjacent cov4 eigenvalues closer than the gap threshold
  bool non_identifiable = false;  // every |mean G(z_k)| below threshold
  bool converged = true;
  int iterations = 0;  // Jacobi sweeps or total fixed-point iterations
  int restarts = 0;
  std::string pilot;  // adaptive deflation: estimator used for the pilot
  std::string criterion;  // adaptive deflation: selection criterion used
};

/// W unmixes: Z = (X - 1 b') W'. A = W^{-1}.
struct UnmixingResult {
  Matrix W;
  Matrix A;
  Vector b;
  Matrix Z;
  std::string method;
  Diagnostics diagnostics;
};

/// Row permutation with sign changes. Applied to a matrix, row i of the
/// result is signs[i] * row perm[i] of the input.
struct SignedPermutation {
  std::vector<Index> perm;
  std::vector<int> signs;

  static SignedPermutation identity(Index p);
  Matrix apply_rows(const Matrix& M) const;
  Matrix apply_cols(const Matrix& M) const;
  Matrix matrix() const;
  bool operator==(const SignedPermutation&) const = default;
};

/// Signed permutation S with S.apply_rows(W) closest to W_ref, found greedily
/// on |W_ref W^{-1}|.
SignedPermutation match_to_reference(const Matrix& W, const Matrix& W_ref);

/// Signed column permutation S with S.apply_cols(Z) closest to Z_ref, found
/// greedily on the cross-moment matrix Z_ref' Z.
SignedPermutation match_scores(const Matrix& Z, const Matrix& Z_ref);

/// Applies the output conventions to a raw unmixing matrix and fills Z, A
/// and per-component diagnostics:
///  - each score column has non-negative skewness; when |skewness| < 1e-3 the
///    largest-magnitude entry of the W row is made positive instead;
///  - components are sorted by descending excess kurtosis, ties by raw index.
/// `raw_info` (optional, raw order) carries estimator-specific fields.
UnmixingResult finalize_unmixing(const Matrix& X, const Matrix& W_raw, const Vector& b,
                                 std::string method, Diagnostics diagnostics,
                                 std::vector<ComponentInfo> raw_info = {});

}  // namespace coda_ica
