#include <coda_ica/algebraic.hpp>
#include <coda_ica/coda.hpp>
#include <coda_ica/eval.hpp>
#include <coda_ica/fastica.hpp>
#include <coda_ica/scatter.hpp>

#include <benchmark/benchmark.h>

using namespace coda_ica;

namespace {

Matrix mixed_data(Index n, Index p, std::uint64_t seed) {
  std::vector<SourceSpec> src;
  const SourceSpec pool[] = {SourceSpec::uniform(), SourceSpec::exponential(), SourceSpec::laplace()};
  for (Index j = 0; j < p; ++j) src.push_back(pool[j % 3]);
  return simulate_ic_data(n, src, random_mixing(p, seed), Vector::Zero(p), seed).X;
}

void BM_Whiten(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(whiten(X));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Whiten)->Args({10000, 5})->Args({10000, 20})->Args({100000, 5});

void BM_IlrRows(benchmark::State& state) {
  Rng rng(2);
  const Index d = state.range(1);
  const Matrix X = rng.normal_matrix(state.range(0), d).array().exp();
  const ContrastMatrix V = contrast_matrix(d);
  for (auto _ : state) benchmark::DoNotOptimize(ilr_rows(X, V));
}
BENCHMARK(BM_IlrRows)->Args({10000, 10})->Args({10000, 48});

void BM_CumulantMatrices(benchmark::State& state) {
  const Index p = state.range(1);
  const Matrix Xs = whiten(mixed_data(state.range(0), p, 3)).X_st;
  const auto pairs = band_pairs(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(cumulant_matrices(Xs, pairs));
}
BENCHMARK(BM_CumulantMatrices)->Args({10000, 5})->Args({10000, 10});

void BM_Fobi(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 4);
  for (auto _ : state) benchmark::DoNotOptimize(fobi(X));
}
BENCHMARK(BM_Fobi)->Args({20000, 4})->Args({20000, 20});

void BM_Jade(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 5);
  for (auto _ : state) benchmark::DoNotOptimize(jade(X));
}
BENCHMARK(BM_Jade)->Args({20000, 4})->Args({20000, 10});

void BM_KJade(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 6);
  for (auto _ : state) benchmark::DoNotOptimize(k_jade(X, 2));
}
BENCHMARK(BM_KJade)->Args({20000, 10})->Args({20000, 30});

void BM_DeflationFastIca(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 7);
  for (auto _ : state) benchmark::DoNotOptimize(deflation_fastica(X, Nonlinearity::pow3()));
}
BENCHMARK(BM_DeflationFastIca)->Args({20000, 4})->Args({20000, 10});

void BM_SymmetricFastIca(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 8);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_fastica(X, Nonlinearity::tanh()));
}
BENCHMARK(BM_SymmetricFastIca)->Args({20000, 4})->Args({20000, 10});

void BM_AdaptiveFastIca(benchmark::State& state) {
  const Matrix X = mixed_data(state.range(0), state.range(1), 9);
  const auto candidates = candidate_set();
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_deflation_fastica(X, candidates));
}
BENCHMARK(BM_AdaptiveFastIca)->Args({20000, 4});

}  // namespace
