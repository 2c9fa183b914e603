#pragma once

// Simulated inputs shared by the estimator tests.

#include <coda_ica/eval.hpp>

#include <vector>

namespace coda_ica::testing {

inline std::vector<SourceSpec> three_sources() {
  return {SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace()};
}

struct Simulation {
  SimulatedData data;
  Matrix A;
  Vector b;
};

inline Simulation simulate(Index n, const std::vector<SourceSpec>& sources, std::uint64_t seed) {
  const Index p = static_cast<Index>(sources.size());
  Simulation s;
  s.A = random_mixing(p, mix_seed(seed, 1000));
  Rng rng(mix_seed(seed, 1001));
  s.b = rng.normal_matrix(p, 1);
  s.data = simulate_ic_data(n, sources, s.A, s.b, seed);
  return s;
}

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace coda_ica::testing
