/*
 Copyright 2026 The pathreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <benchmark/benchmark.h>

#include "pathreg/control.hpp"
#include "pathreg/filter.hpp"
#include "pathreg/numerics.hpp"
#include "pathreg/plant.hpp"
#include "pathreg/signal.hpp"

using namespace pathreg;

namespace {

void BM_Dare(benchmark::State& state) {
    const auto p = plants::tracking_control();
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::solve_dare(p.A, p.B_u, p.Q, p.R).P);
    }
}
BENCHMARK(BM_Dare);

void BM_PathlengthSynthesis(benchmark::State& state) {
    const auto p = plants::tracking_control();
    for (auto _ : state) {
        auto s = control::pathlength_synthesize(p, 40.0);
        benchmark::DoNotOptimize(s.report.feasible);
    }
}
BENCHMARK(BM_PathlengthSynthesis)->Unit(benchmark::kMicrosecond);

void BM_FilterSynthesis(benchmark::State& state) {
    const auto p = plants::tracking_filter();
    for (auto _ : state) {
        auto s = filter::pathlength_filter_synthesize(p, 40.0);
        benchmark::DoNotOptimize(s.report.sigma_zpi);
    }
}
BENCHMARK(BM_FilterSynthesis)->Unit(benchmark::kMicrosecond);

void BM_FilterStep(benchmark::State& state) {
    const auto p = plants::tracking_filter();
    auto syn = filter::pathlength_filter_synthesize(p, 40.0);
    Vector y = Vector::Ones(p.measurements());
    for (auto _ : state) {
        benchmark::DoNotOptimize(syn.filter->update(y));
    }
}
BENCHMARK(BM_FilterStep);

void BM_OfflineOracle(benchmark::State& state) {
    const auto p = plants::tracking_control();
    signal::DisturbanceSpec s;
    s.kind = signal::Kind::RandomWalk;
    s.dimension = static_cast<int>(p.disturbances());
    const Signal w = signal::generate(s, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(control::offline_optimal(p, w).cost);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OfflineOracle)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
