// Copyright 2026 The lrmac Authors.
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

#include <vector>

#include "lrmac/channel.hpp"
#include "lrmac/harness.hpp"
#include "lrmac/rate.hpp"
#include "lrmac/solver.hpp"
#include "lrmac/timeshare.hpp"

namespace {

using namespace lrmac;

ChannelSet channels(int subcarriers, int antennas) {
  ScenarioConfig cfg;
  cfg.num_subcarriers = subcarriers;
  cfg.ap_antennas = antennas;
  cfg.distances_m = {2.0, 3.0, 6.0};
  cfg.seed = 7;
  return generate_channels(cfg);
}

void BM_SicRates(benchmark::State& state) {
  const auto ch = channels(static_cast<int>(state.range(0)), 2);
  PowerAllocation a(3, ch.num_subcarriers());
  a.e.setConstant(1e-3);
  const DecodingOrder order({0, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(sic_rates(ch, a, order));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SicRates)->Arg(16)->Arg(64)->Arg(256);

void BM_MinEnergy(benchmark::State& state) {
  const auto ch = channels(static_cast<int>(state.range(0)), 2);
  const RateRequirement req{{100.0, 120.0, 80.0}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(min_energy_allocate(ch, req));
}
BENCHMARK(BM_MinEnergy)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MaxRate(benchmark::State& state) {
  const auto ch = channels(static_cast<int>(state.range(0)), 2);
  EnergyBudget budget;
  budget.e_max.assign(3, dbm_to_watts(15.0));
  budget.rate_weights = {1.0, 1.5, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(max_rate_allocate(ch, budget));
}
BENCHMARK(BM_MaxRate)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolveTimeshare(benchmark::State& state) {
  const auto cand = timeshare_demo_candidates();
  const std::vector<double> target(3, 500.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_timeshare(cand, target, 1e-3));
}
BENCHMARK(BM_SolveTimeshare)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
