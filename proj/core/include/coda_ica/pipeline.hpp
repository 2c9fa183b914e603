#pragma once

// ICA on compositions: ilr-space IC model, clr loadings, kurtosis ordering
// and signal reconstruction onto the simplex.

#include <coda_ica/algebraic.hpp>
#include <coda_ica/coda.hpp>
#include <coda_ica/fastica.hpp>

#include <optional>
#include <string>
#include <vector>

namespace coda_ica {

struct EstimatorSpec {
  enum class Kind { fobi, jade, kjade, fastica_defl, fastica_adaptive, fastica_sym, fastica_sqsym };

  Kind kind = Kind::fobi;
  Index k = 1;  // kjade band width
  /// One id for defl/sym/sqsym (default pow3 / tanh / tanh); the candidate set
  /// for adaptive (default g1..g14).
  std::vector<std::string> nonlinearities;
  FastIcaOptions fastica{};
  AlgebraicOptions algebraic{};

  /// fobi | jade | kjade | fastica-defl | fastica-adaptive | fastica-sym | fastica-sqsym
  static Kind parse_kind(const std::string& name);
  static std::vector<std::string> kind_names();
  std::string tag() const;
  /// Resolves nonlinearity ids; throws DomainError on unknown ids or bad k.
  void validate(Index p) const;
};

UnmixingResult run_estimator(const Matrix& X, const EstimatorSpec& spec);

struct CodaIcaResult {
  UnmixingResult base;  // in ilr coordinates
  ContrastMatrix V;
  Matrix W_clr;  // W_ilr V', (d-1) x d, rows sum to zero
};

CodaIcaResult compositional_ica(const CompositionMatrix& X, const EstimatorSpec& spec,
                                const std::optional<ContrastMatrix>& V = std::nullopt);

/// Components by descending sample excess kurtosis of the scores; W_ilr and
/// W_clr rows, A columns, Z columns and diagnostics permuted together.
CodaIcaResult order_by_kurtosis(CodaIcaResult result);

/// Non-empty, duplicate-free, 0-based component indices.
class SignalPartition {
 public:
  SignalPartition(std::vector<Index> indices, Index components);
  const std::vector<Index>& signal_indices() const { return indices_; }
  Matrix select_columns(const Matrix& M) const;

 private:
  std::vector<Index> indices_;
};

struct Reconstruction {
  Matrix ilr;
  Matrix clr;
  CompositionMatrix composition;
};

/// ilr_s = Z_s A_s' + 1 b',  clr_s = ilr_s V',  x_s = closure(exp(clr_s), kappa).
Reconstruction reconstruct(const Matrix& Z, const Matrix& A_ilr, const Vector& b,
                           const ContrastMatrix& V, const SignalPartition& partition,
                           double kappa = 1.0);
Reconstruction reconstruct(const CodaIcaResult& result, const SignalPartition& partition,
                           double kappa = 1.0);

struct LocalMinimum {
  Index grid_index = 0;
  double location = 0.0;
  double density = 0.0;
  /// min(highest density to the left, highest to the right) - density.
  double prominence = 0.0;
  bool dominant = false;
};

struct DensityEstimate {
  Vector grid;
  Vector density;
  double bandwidth = 0.0;
  std::vector<LocalMinimum> minima;
};

/// 0.9 * min(sd, IQR / 1.34) * n^{-1/5}; falls back to sd if the IQR is 0.
double silverman_bandwidth(const Vector& values);

/// Gaussian kernel density with Silverman bandwidth h on `grid` equispaced
/// points spanning [min - 3h, max + 3h]. Interior grid points below both
/// neighbours are reported as local minima; a minimum is dominant when its
/// prominence is at least `dominance` times the maximum density.
DensityEstimate kernel_density(const Vector& values, Index grid = 512, double dominance = 0.1);

}  // namespace coda_ica
