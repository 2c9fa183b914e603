#pragma once

#include <coda_ica/types.hpp>

#include <cstdint>
#include <random>

namespace coda_ica {

/// Seeded generator with platform-independent variate transforms.
/// std::mt19937_64 is bit-specified by the standard; the distribution
/// objects of <random> are not, so the transforms below are our own.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/sampler-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, second variate cached).
  double normal();
  Matrix normal_matrix(Index rows, Index cols);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Haar-distributed random orthogonal matrix (QR of a Gaussian matrix with
/// the diagonal of R made positive).
Matrix random_orthogonal(Index p, Rng& rng);

}  // namespace coda_ica
