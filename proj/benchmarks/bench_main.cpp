// Copyright 2026 The nvforge Authors
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

#include "nvforge/experiment.hpp"
#include "nvforge/kak.hpp"
#include "nvforge/pulse.hpp"
#include "nvforge/random.hpp"

namespace {

using namespace nvforge;

void BM_Decompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Mat4> inputs;
  for (int k = 0; k < 64; ++k) inputs.push_back(haar_unitary4(rng));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose(inputs[k++ % inputs.size()]));
  }
}
BENCHMARK(BM_Decompose);

void BM_Synthesize(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const FifteenParams p = decompose(haar_unitary4(rng));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(p));
}
BENCHMARK(BM_Synthesize);

void BM_CompileToPulses(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const FifteenParams p = decompose(haar_unitary4(rng));
  const PhysicalParams phys;
  for (auto _ : state) benchmark::DoNotOptimize(compile_to_pulses(p, phys));
}
BENCHMARK(BM_CompileToPulses);

void BM_SimulateSchedule(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const PhysicalParams phys;
  const PulseSchedule s = compile_to_pulses(decompose(haar_unitary4(rng)), phys);
  const NoiseModel noise = NoiseModel::calibrated();
  const DensityMat4 rho = initial_state(noise);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_schedule(s, rho, noise, phys));
  }
}
BENCHMARK(BM_SimulateSchedule);

void BM_RunDj(benchmark::State& state) {
  RunOptions o;
  o.mode = static_cast<Mode>(state.range(0));
  o.noise = NoiseModel::calibrated();
  for (auto _ : state) benchmark::DoNotOptimize(run_dj(DjOracle::balanced, o));
}
BENCHMARK(BM_RunDj)->Arg(static_cast<int>(Mode::ideal))
    ->Arg(static_cast<int>(Mode::noisy))->Arg(static_cast<int>(Mode::pulse));

}  // namespace

BENCHMARK_MAIN();
