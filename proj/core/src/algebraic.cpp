#include <coda_ica/algebraic.hpp>
#include <coda_ica/scatter.hpp>

#include <cmath>
#include <sstream>

namespace coda_ica {

namespace {

struct FobiRaw {
  WhitenedData white;
  SymmetricEigen eig;
  Matrix W;  // rows in descending eigenvalue order
};

FobiRaw fobi_raw(const Matrix& X) {
  FobiRaw f;
  f.white = whiten(X);
  f.eig = symmetric_eigen(cov4(f.white.X_st));
  f.W = f.eig.vectors.transpose() * f.white.cov_inv_sqrt;
  return f;
}

void flag_gaps(Diagnostics& diag, const Vector& eigenvalues, double threshold) {
  for (Index k = 0; k + 1 < eigenvalues.size(); ++k) {
    const double gap = eigenvalues(k) - eigenvalues(k + 1);
    if (gap < threshold) {
      diag.a4_warning = true;
      std::ostringstream os;
      os << "cov4 eigenvalues " << k + 1 << " and " << k + 2 << " differ by " << gap
         << " (< " << threshold << "): kurtosis values may not be distinct";
      diag.warnings.push_back(os.str());
    }
  }
}

// Unique cumulant matrices; off-diagonal ones are scaled by sqrt(2) so the
// joint criterion equals the sum over all p^2 (C_ij = C_ji).
std::vector<Matrix> weighted_cumulants(const Matrix& X_st,
                                       const std::vector<std::pair<Index, Index>>& pairs) {
  std::vector<Matrix> mats;
  for (const auto& [i, j] : pairs) {
    if (j < i) continue;
    Matrix C = cumulant_matrix(X_st, i, j).C;
    if (i != j) C *= std::sqrt(2.0);
    mats.push_back(std::move(C));
  }
  return mats;
}

void record_sweeps(Diagnostics& diag, const JointDiagResult& jd) {
  diag.iterations = jd.sweeps;
  diag.converged = jd.converged;
}

}  // namespace

UnmixingResult fobi(const Matrix& X, const AlgebraicOptions& options) {
  FobiRaw f = fobi_raw(X);
  Diagnostics diag;
  diag.eigenvalues = f.eig.values;
  flag_gaps(diag, f.eig.values, options.eigen_gap_warning);
  return finalize_unmixing(X, f.W, f.white.mean, "fobi", std::move(diag));
}

UnmixingResult jade(const Matrix& X, const AlgebraicOptions& options) {
  const Index p = X.cols();
  if (p > options.jade_dim_cap) {
    std::ostringstream os;
    os << "JADE needs " << p * p << " cumulant matrices for p = " << p
       << ", above the dimension cap of " << options.jade_dim_cap
       << "; use k-JADE or FastICA instead";
    throw DimensionCap(os.str());
  }
  const WhitenedData w = whiten(X);
  const auto mats = weighted_cumulants(w.X_st, band_pairs(p, p));
  const JointDiagResult jd = joint_diagonalize(mats, options.joint_diag);
  Diagnostics diag;
  record_sweeps(diag, jd);
  return finalize_unmixing(X, jd.U.transpose() * w.cov_inv_sqrt, w.mean, "jade",
                           std::move(diag));
}

UnmixingResult k_jade(const Matrix& X, Index k, const AlgebraicOptions& options) {
  const Index p = X.cols();
  if (k < 1 || k > p) {
    std::ostringstream os;
    os << "k-JADE: k must lie in [1, " << p << "], got " << k;
    throw DomainError(os.str());
  }
  FobiRaw f = fobi_raw(X);
  const Matrix X_st = (X.rowwise() - f.white.mean.transpose()) * f.W.transpose();
  const auto mats = weighted_cumulants(X_st, band_pairs(p, k));
  const JointDiagResult jd = joint_diagonalize(mats, options.joint_diag);
  Diagnostics diag;
  diag.eigenvalues = f.eig.values;
  record_sweeps(diag, jd);
  std::ostringstream tag;
  tag << "kjade(" << k << ")";
  return finalize_unmixing(X, jd.U.transpose() * f.W, f.white.mean, tag.str(), std::move(diag));
}

}  // namespace coda_ica
