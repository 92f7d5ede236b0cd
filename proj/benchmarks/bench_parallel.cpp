// mimo-rfsel  RF-chain activation and antenna selection for downlink massive MIMO
// Copyright (C) 2026 mimo-rfsel contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference vs OpenMP-parallel paths. The parallel implementations
// are required to produce bit-identical results (see the unit tests); this
// target measures what the parallelism buys.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "rfsel/channel.hpp"
#include "rfsel/experiments.hpp"
#include "rfsel/selection.hpp"

using namespace rfsel;

namespace
{

ChannelRealization make_realization(int users, int antennas, std::uint64_t seed)
{
    Rng geo_rng = substream(seed, {0});
    const UserGeometry geo = draw_user_positions(users, 500.0, 35.0, geo_rng);
    Rng ch_rng = substream(seed, {1});
    ChannelRealization ch = draw_small_scale(users, antennas, ch_rng, seed);
    ch.large_scale = path_loss(geo, 3.7);
    return ch;
}

ExperimentConfig sweep_config(int threads)
{
    ExperimentConfig cfg;
    cfg.users = 8;
    cfg.antennas = 48;
    cfg.p_max = 2.0;
    cfg.p_c = 0.05;
    cfg.trials = 64;
    cfg.master_seed = 1;
    cfg.threads = threads;
    cfg.axis = SweepAxis::rf_chains;
    for (int s = 8; s <= 40; ++s)
        cfg.sweep_values.push_back(s);
    cfg.algorithms = {Algorithm::greedy, Algorithm::random};
    return cfg;
}

void bench_sweep_point(benchmark::State &state)
{
    const ExperimentConfig cfg = sweep_config(static_cast<int>(state.range(0)));
    for (auto _ : state)
    {
        const AggregateStats agg = run_point_range(cfg, 0, 0, cfg.trials);
        benchmark::DoNotOptimize(agg.cells.size());
    }
}

void bench_bfs_select(benchmark::State &state)
{
    const ChannelRealization ch = make_realization(3, 18, 7);
    const CircuitBudget budget_cfg(0.6, 0.05);
    BfsOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state)
    {
        const SelectionResult res = bfs_select(ch, budget_cfg, opts);
        benchmark::DoNotOptimize(res.rate);
    }
}

void bench_greedy_scan(benchmark::State &state)
{
    const ChannelRealization ch = make_realization(12, 384, 11);
    const CircuitBudget budget_cfg(6.0, 0.05);
    GreedyOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state)
    {
        const SelectionResult res = greedy_select(ch, budget_cfg, opts);
        benchmark::DoNotOptimize(res.rate);
    }
}

} // namespace

BENCHMARK(bench_sweep_point)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_bfs_select)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_greedy_scan)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
