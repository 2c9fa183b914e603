#pragma once

// Simulation harness and recovery metrics.

#include <coda_ica/rng.hpp>
#include <coda_ica/types.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace coda_ica {

enum class SourceKind { uniform, exponential, laplace, student_t, gaussian, two_point };

/// A latent source distribution, standardized to mean 0 and variance 1.
/// `param` is the degrees of freedom for student_t (> 2) and the success
/// probability for two_point (a standardized Bernoulli).
struct SourceSpec {
  SourceKind kind = SourceKind::gaussian;
  double param = 0.0;

  static SourceSpec uniform() { return {SourceKind::uniform, 0.0}; }
  static SourceSpec exponential() { return {SourceKind::exponential, 0.0}; }
  static SourceSpec laplace() { return {SourceKind::laplace, 0.0}; }
  static SourceSpec student_t(double df) { return {SourceKind::student_t, df}; }
  static SourceSpec gaussian() { return {SourceKind::gaussian, 0.0}; }
  static SourceSpec two_point(double prob) { return {SourceKind::two_point, prob}; }

  /// Parses "uniform", "exponential", "laplace", "gaussian", "t(5)", "two-point(0.3)".
  static SourceSpec parse(const std::string& text);
  /// Throws DomainError for an out-of-range parameter.
  void validate() const;

  std::string name() const;
  /// Theoretical excess kurtosis (infinity for t with df <= 4).
  double excess_kurtosis() const;
  /// n standardized draws.
  Vector sample(Index n, Rng& rng) const;
};

struct SimulatedData {
  Matrix X;
  Matrix Z_true;
};

/// X = Z_true A' + 1 b'. Column j of Z_true uses sub-seed mix_seed(seed, j).
SimulatedData simulate_ic_data(Index n, const std::vector<SourceSpec>& sources, const Matrix& A,
                               const Vector& b, std::uint64_t seed);

/// Random mixing matrix Q1 diag(s) Q2 with Haar orthogonal Q1, Q2 and
/// singular values log-uniform in [1, max_condition].
Matrix random_mixing(Index p, std::uint64_t seed, double max_condition = 4.0);

/// Minimum distance index of G = W A: distance of G from the nearest scaled
/// signed permutation, normalized to [0, 1]. 0 iff perfect recovery.
double md_index(const Matrix& W, const Matrix& A);

/// Optimal assignment maximizing sum_i M(i, perm[i]) (Hungarian method).
std::vector<Index> max_weight_assignment(const Matrix& M);

}  // namespace coda_ica
