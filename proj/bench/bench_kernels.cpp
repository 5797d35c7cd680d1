/* Copyright 2026 The rismc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference against the OpenMP kernels. Run with
// --benchmark_counters_tabular=true to line the pairs up.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "rismc/baselines.hpp"
#include "rismc/bounds.hpp"
#include "rismc/harness.hpp"
#include "rismc/model.hpp"

namespace {

using namespace rismc;

ChannelRealization instance(int M, int N, int K) {
  RicianParams p;
  p.seed = 7;
  return sample_channels(SystemDims::make(M, N, K), p);
}

void BM_BruteForce(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const ChannelRealization ch = instance(1, 3, 2);
  baselines::GridSpec grid;
  grid.phase_levels = 120;
  for (auto _ : state) benchmark::DoNotOptimize(baselines::brute_force(ch, 1.0, grid, parallel).report.capacity_bits);
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VerifyMoments(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bounds::verify_moments(SystemDims::make(8, 16, 1), RicianFactor::finite(1.0), 2000, 11, parallel).mean);
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}
BENCHMARK(BM_VerifyMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  harness::ExperimentPlan plan;
  plan.name = "bench";
  plan.axis = harness::SweepAxis::N;
  plan.axis_values = {2, 4};
  plan.M = 2;
  plan.K = 2;
  plan.methods = {harness::Method::alternating, harness::Method::no_ris};
  plan.trials = 4;
  plan.seed = 3;
  plan.alternating.J = 2;
  plan.workers = state.range(0) != 0 ? omp_get_max_threads() : 1;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run(plan).rows.size());
  state.counters["threads"] = plan.workers;
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
