// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "mpdo/bound.hpp"
#include "mpdo/evaluate.hpp"
#include "mpdo/grid.hpp"
#include "mpdo/sharpness.hpp"
#include "mpdo/stats.hpp"
#include "mpdo/symbol.hpp"
#include "mpdo/weights.hpp"

namespace {

using namespace mpdo;

std::vector<Field> inputs(const Grid& g, int N) {
  Rng rng(1);
  std::vector<Field> f;
  for (int j = 0; j < N; ++j) f.push_back(random_trig_polynomial(g, 0.5, rng));
  return f;
}

void BM_Fft1d(benchmark::State& state) {
  const Grid g(1, 16.0, static_cast<int>(state.range(0)));
  const Field f = inputs(g, 1)[0];
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft1d)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity();

void BM_Fft2d(benchmark::State& state) {
  const Grid g(2, 16.0, static_cast<int>(state.range(0)));
  const Field f = inputs(g, 1)[0];
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
}
BENCHMARK(BM_Fft2d)->RangeMultiplier(2)->Range(32, 512);

void run_path(benchmark::State& state, const SymbolSpec& s, EvalPath path) {
  const Grid g(1, 16.0, static_cast<int>(state.range(0)));
  const auto f = inputs(g, 2);
  EvalOptions opt;
  opt.path = path;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(s, f, opt));
}

void BM_EvalDirect(benchmark::State& state) {
  run_path(state, SymbolSpec::band_limited({2.0, 2.0, 2.0}, 1, 3), EvalPath::direct);
}
BENCHMARK(BM_EvalDirect)->Arg(32)->Arg(64)->Arg(128);

void BM_EvalAggregated(benchmark::State& state) {
  run_path(state, SymbolSpec::lattice(WeightSpec::example_decay(1, 2).restrict_to_lattice(1, 2, 4)),
           EvalPath::aggregated);
}
BENCHMARK(BM_EvalAggregated)->Arg(128)->Arg(512)->Arg(2048);

void BM_EvalModes(benchmark::State& state) {
  run_path(state, SymbolSpec::band_limited({2.0, 2.0, 2.0}, 1, 3), EvalPath::modes);
}
BENCHMARK(BM_EvalModes)->Arg(128)->Arg(512)->Arg(2048);

void BM_SeparableFast(benchmark::State& state) {
  const Grid g(1, 16.0, static_cast<int>(state.range(0)));
  const SymbolSpec s = SymbolSpec::separable({Profile::gaussian(2.0), Profile::lp_shell(1)}, 1);
  const auto f = inputs(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_separable_fast(s, f));
}
BENCHMARK(BM_SeparableFast)->Arg(512)->Arg(4096)->Arg(32768);

void BM_BnAlternating(benchmark::State& state) {
  const int R = static_cast<int>(state.range(0));
  const LatticeSeq V = WeightSpec::example_decay(1, 2).restrict_to_lattice(1, 2, R);
  for (auto _ : state) benchmark::DoNotOptimize(bn_constant_estimate(V, R, BnMethod::alternating));
}
BENCHMARK(BM_BnAlternating)->Arg(8)->Arg(16)->Arg(32);

void BM_Dk(benchmark::State& state) {
  const std::vector<double> b = {0.6, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(compute_dk(-0.5, b, static_cast<int>(state.range(0)), 1, 2));
}
BENCHMARK(BM_Dk)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
