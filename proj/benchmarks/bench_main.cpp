// Copyright 2026 The vbqc Authors
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

#include "vbqc/compiler.hpp"
#include "vbqc/pattern.hpp"
#include "vbqc/protocol.hpp"
#include "vbqc/rngtest.hpp"
#include "vbqc/secretdep.hpp"
#include "vbqc/simulator.hpp"

namespace vbqc {
namespace {

void BM_CompileCnotGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MeasurementPattern p = cnot_grid_pattern(n, 4, std::vector<int>(n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(compile(p));
}
BENCHMARK(BM_CompileCnotGrid)->Arg(2)->Arg(4)->Arg(8);

void BM_XXOnRegister(benchmark::State& state) {
  const NoiseModel noiseless;
  Simulator sim(noiseless, Engine(1));
  const int qubits = static_cast<int>(state.range(0));
  for (int q = 0; q < qubits; ++q) sim.alloc(q);
  for (auto _ : state) sim.apply_xx(0, qubits - 1);
}
BENCHMARK(BM_XXOnRegister)->Arg(3)->Arg(8)->Arg(14);

void BM_ComputationRound(benchmark::State& state) {
  const MeasurementPattern p = grover_pattern(1);
  const LazySchedule s = compile(p);
  const NoiseModel noise = parse_noise_spec("depol1=0.001,depol2=0.01");
  const std::vector<int> x{0, 0};
  Engine rng(2);
  for (auto _ : state) {
    RoundSecrets sec = draw_secrets(p, RoundKind::kComputation, rng);
    benchmark::DoNotOptimize(execute_round(p, s, sec, x, noise, Engine(rng())));
  }
}
BENCHMARK(BM_ComputationRound);

void BM_ChannelFit(benchmark::State& state) {
  const StateSet states = reference_tomography_states();
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_secret_independent_channel(states));
}
BENCHMARK(BM_ChannelFit)->Unit(benchmark::kMillisecond);

void BM_FipsSuite(benchmark::State& state) {
  Engine rng(3);
  BitStream bits(kFipsBits);
  for (auto& b : bits) b = static_cast<std::uint8_t>(random_bit(rng));
  for (auto _ : state) benchmark::DoNotOptimize(fips_suite(bits));
}
BENCHMARK(BM_FipsSuite);

}  // namespace
}  // namespace vbqc
BENCHMARK_MAIN();
