// Copyright 2026 The weakmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "weakmetro/dynamic_estimation.hpp"
#include "weakmetro/models.hpp"
#include "weakmetro/static_estimation.hpp"

namespace weakmetro {
namespace {

HermitianOperator random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return HermitianOperator(ComplexMatrix(0.5 * (g + g.adjoint())));
}

void BM_HermitianEig(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const HermitianOperator h = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->RangeMultiplier(2)->Range(4, 64);

void BM_KSpectral(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int dim = static_cast<int>(state.range(0));
  const SpectralDecomposition spectrum = hermitian_eig(random_hermitian(dim, rng));
  const HermitianOperator h1 = random_hermitian(dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(k_operator_spectral(spectrum, h1, 3.0));
}
BENCHMARK(BM_KSpectral)->RangeMultiplier(2)->Range(4, 32);

void BM_KQuadrature(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int dim = static_cast<int>(state.range(0));
  const HermitianOperator h0 = random_hermitian(dim, rng);
  const HermitianOperator h1 = random_hermitian(dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(k_operator_quadrature(h0, h1, 3.0));
}
BENCHMARK(BM_KQuadrature)->RangeMultiplier(2)->Range(4, 32);

void BM_StaticReport(benchmark::State& state) {
  const auto problem =
      build_model({ModelKind::kAnharmonic2Param, 0.0, static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(static_report(problem));
}
BENCHMARK(BM_StaticReport)->Arg(16)->Arg(64);

void BM_AnharmonicScan(benchmark::State& state) {
  const auto problem = build_model({ModelKind::kAnharmonic2Param});
  const StateVector probe = problem.reference_state();
  const std::vector<double> times = linspace(0.05, 3.1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_time(problem, probe, times));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnharmonicScan)->Arg(200)->Arg(2000);

}  // namespace
}  // namespace weakmetro

BENCHMARK_MAIN();
