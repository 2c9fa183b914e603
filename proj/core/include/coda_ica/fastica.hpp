#pragma once

// Projection-pursuit ICA: deflation-based, reloaded/adaptive deflation,
// symmetric and squared symmetric FastICA. All variants work on the
// covariance-whitened data and return W = U' cov^{-1/2}.

#include <coda_ica/algebraic.hpp>
#include <coda_ica/nonlinearity.hpp>
#include <coda_ica/unmixing.hpp>

#include <cstdint>
#include <vector>

namespace coda_ica {

struct FastIcaOptions {
  enum class Init { identity, random_orthogonal };

  double tol = 1e-6;
  int max_iter = 1000;
  int restarts = 5;
  std::uint64_t seed = 0;
  Init init = Init::random_orthogonal;
  /// A result is flagged non-identifiable when every |mean G(z_k)| is below
  /// max(identifiability_threshold, identifiability_sd * sd_G / sqrt(n)),
  /// sd_G the standard deviation of G under a standard normal.
  double identifiability_threshold = 0.01;
  double identifiability_sd = 4.0;

  void validate() const;
};

UnmixingResult deflation_fastica(const Matrix& X, const Nonlinearity& g,
                                 const FastIcaOptions& options = {});

/// Selection criterion of adaptive deflation for one standardized score
/// column:  (E[g^2] - E[z g]^2) / (E[z g] - E[g'])^2.  Smaller is easier to
/// extract. Throws CriterionUndefined when |E[z g] - E[g']| < 1e-12.
double alpha_criterion(const Vector& scores, const Nonlinearity& g);

/// Pilot estimate by FOBI (k-JADE with k = 1 if FOBI raises its eigenvalue
/// gap warning), a per-component choice of the candidate with smallest alpha,
/// extraction in increasing alpha order starting from the pilot directions.
UnmixingResult adaptive_deflation_fastica(const Matrix& X,
                                          const std::vector<Nonlinearity>& candidates,
                                          const FastIcaOptions& options = {},
                                          const AlgebraicOptions& pilot_options = {});

/// Adaptive deflation with a single candidate: only the extraction order is
/// chosen from the pilot.
UnmixingResult reloaded_deflation_fastica(const Matrix& X, const Nonlinearity& g,
                                          const FastIcaOptions& options = {},
                                          const AlgebraicOptions& pilot_options = {});

UnmixingResult symmetric_fastica(const Matrix& X, const Nonlinearity& g,
                                 const FastIcaOptions& options = {});

/// Symmetric FastICA for the objective sum_k (E[G(u_k' x)])^2.
UnmixingResult squared_symmetric_fastica(const Matrix& X, const Nonlinearity& g,
                                         const FastIcaOptions& options = {});

}  // namespace coda_ica
