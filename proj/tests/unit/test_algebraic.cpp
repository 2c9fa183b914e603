#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <coda_ica/algebraic.hpp>
#include <coda_ica/eval.hpp>
#include <coda_ica/scatter.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include <cmath>
#include <functional>

using namespace coda_ica;
using namespace coda_ica::testing;

namespace {
void check_invariants(const Matrix& X, const UnmixingResult& r) {
  const Index p = X.cols();
  CHECK(max_abs(plain_covariance(r.Z) - Matrix::Identity(p, p)) < 1e-8);
  CHECK(r.Z.colwise().mean().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(max_abs(r.W * r.A - Matrix::Identity(p, p)) < 1e-8);
  const Matrix Z = (X.rowwise() - r.b.transpose()) * r.W.transpose();
  CHECK(max_abs(Z - r.Z) < 1e-10);
  const Vector k = excess_kurtosis(r.Z);
  for (Index i = 1; i < p; ++i) CHECK(k(i - 1) >= k(i) - 1e-12);
  const Vector s = skewness(r.Z);
  for (Index i = 0; i < p; ++i) CHECK(s(i) >= -1e-3);
}

using Estimator = std::function<UnmixingResult(const Matrix&)>;

const std::vector<std::pair<const char*, Estimator>>& estimators() {
  static const std::vector<std::pair<const char*, Estimator>> list{
      {"fobi", [](const Matrix& X) { return fobi(X); }},
      {"jade", [](const Matrix& X) { return jade(X); }},
      {"kjade1", [](const Matrix& X) { return k_jade(X, 1); }},
      {"kjade2", [](const Matrix& X) { return k_jade(X, 2); }},
  };
  return list;
}
}  // namespace

TEST_CASE("output invariants hold for every estimator") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Simulation s = simulate(2000, three_sources(), seed);
    for (const auto& [name, est] : estimators()) {
      CAPTURE(name);
      check_invariants(s.data.X, est(s.data.X));
    }
  }
}

TEST_CASE("three-source recovery") {
  const Simulation s = simulate(20000, three_sources(), 7);
  const double md_fobi = md_index(fobi(s.data.X).W, s.A);
  const double md_jade = md_index(jade(s.data.X).W, s.A);
  const double md_k2 = md_index(k_jade(s.data.X, 2).W, s.A);
  CHECK(md_fobi < 0.15);
  CHECK(md_jade < 0.10);
  CHECK(md_jade <= md_fobi);
  CHECK(md_k2 < 0.10);
}

TEST_CASE("repeated kurtosis separates JADE from FOBI") {
  const std::vector<SourceSpec> src{SourceSpec::laplace(), SourceSpec::laplace(), SourceSpec::uniform()};
  const Simulation s = simulate(20000, src, 8);
  const UnmixingResult f = fobi(s.data.X);
  const double md_fobi = md_index(f.W, s.A);
  const double md_jade = md_index(jade(s.data.X).W, s.A);
  CHECK(md_jade < 0.10);
  CHECK(md_fobi > 2.0 * md_jade);
  CHECK(f.diagnostics.a4_warning);
}

TEST_CASE("Gaussian pair raises the eigenvalue gap warning") {
  const std::vector<SourceSpec> src{SourceSpec::gaussian(), SourceSpec::gaussian(), SourceSpec::exponential()};
  const UnmixingResult f = fobi(simulate(5000, src, 9).data.X);
  CHECK(f.diagnostics.a4_warning);
  CHECK_FALSE(f.diagnostics.warnings.empty());
}

TEST_CASE("affine equivariance of the algebraic estimators") {
  Rng rng(10);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Simulation s = simulate(3000, three_sources(), 20 + seed);
    const Matrix M = rng.normal_matrix(3, 3) + 2.0 * Matrix::Identity(3, 3);
    const Matrix Y = (s.data.X * M.transpose()).rowwise() + rng.normal_matrix(1, 3).row(0);
    for (const auto& [name, est] : estimators()) {
      CAPTURE(name);
      CHECK(signed_perm_distance(est(s.data.X).Z, est(Y).Z) < 1e-6);
    }
  }
}

TEST_CASE("k-JADE with k = p matches JADE") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Simulation s = simulate(3000, three_sources(), 40 + seed);
    CHECK(signed_perm_distance(jade(s.data.X).Z, k_jade(s.data.X, 3).Z) < 1e-6);
  }
}

TEST_CASE("k-JADE with k = 1 stays close to FOBI on distinct kurtoses") {
  // Diagonalizing the C_ii separately and through their sum agree only up to
  // sampling error, so closeness here is statistical.
  const Simulation s = simulate(20000, three_sources(), 11);
  const UnmixingResult f = fobi(s.data.X);
  const UnmixingResult k1 = k_jade(s.data.X, 1);
  CHECK(md_index(k1.W, f.A) < 0.05);
}

TEST_CASE("cov4 eigenvalues follow component kurtosis") {
  const std::vector<SourceSpec> src{SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace(),
                                    SourceSpec::gaussian()};
  const Simulation s = simulate(50000, src, 12);
  const UnmixingResult f = fobi(s.data.X);
  // Raw order is eigenvalue order; its kurtoses must descend.
  std::vector<double> by_raw(4);
  for (const auto& c : f.diagnostics.components) by_raw[static_cast<std::size_t>(c.raw_index)] = c.kurtosis;
  for (std::size_t i = 1; i < 4; ++i) CHECK(by_raw[i - 1] > by_raw[i]);
  for (Index i = 1; i < 4; ++i) CHECK(f.diagnostics.eigenvalues(i - 1) >= f.diagnostics.eigenvalues(i));
}

TEST_CASE("scalar input") {
  Rng rng(13);
  const Matrix X = (SourceSpec::laplace().sample(500, rng) * 3.0).array() + 2.0;
  const double sd = std::sqrt(plain_covariance(X)(0, 0));
  for (const auto& [name, est] : estimators()) {
    if (std::string(name) == "kjade2") continue;
    CAPTURE(name);
    const UnmixingResult r = est(X);
    CHECK(std::abs(r.W(0, 0)) == doctest::Approx(1.0 / sd).epsilon(1e-12));
  }
}

TEST_CASE("argument checks") {
  Rng rng(14);
  const Matrix X = rng.normal_matrix(200, 4);
  CHECK_THROWS_AS(k_jade(X, 0), DomainError);
  CHECK_THROWS_AS(k_jade(X, 5), DomainError);
  AlgebraicOptions small;
  small.jade_dim_cap = 3;
  CHECK_THROWS_AS(jade(X, small), DimensionCap);
  CHECK_NOTHROW(k_jade(X, 2, small));
  Matrix S = X;
  S.col(3) = S.col(0);
  CHECK_THROWS_AS(fobi(S), SingularCovariance);
  CHECK_THROWS_AS(jade(S), SingularCovariance);
}

TEST_CASE("match_to_reference") {
  Rng rng(15);
  const Matrix W = rng.normal_matrix(4, 4) + 2.0 * Matrix::Identity(4, 4);
  CHECK(match_to_reference(W, W) == SignedPermutation::identity(4));

  Matrix swapped = W;
  swapped.row(0) = W.row(2);
  swapped.row(2) = -W.row(0);
  const SignedPermutation sp = match_to_reference(swapped, W);
  CHECK(max_abs(sp.apply_rows(swapped) - W) < 1e-12);

  for (int t = 0; t < 20; ++t) {
    SignedPermutation truth = SignedPermutation::identity(5);
    for (Index i = 4; i > 0; --i) {
      const auto j = static_cast<std::size_t>(std::floor(rng.uniform() * static_cast<double>(i + 1)));
      std::swap(truth.perm[static_cast<std::size_t>(i)], truth.perm[j]);
    }
    for (auto& sgn : truth.signs) sgn = rng.uniform() < 0.5 ? -1 : 1;
    const Matrix ref = rng.normal_matrix(5, 5);
    const Matrix moved = truth.apply_rows(ref);
    const SignedPermutation found = match_to_reference(moved, ref);
    CHECK(max_abs(found.apply_rows(moved) - ref) < 1e-10);
    CHECK(max_abs(found.matrix() * truth.matrix() - Matrix::Identity(5, 5)) < 1e-12);
  }
}
