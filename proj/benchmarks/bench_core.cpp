// SPDX-License-Identifier: Apache-2.0
//
// hrris: link-level simulator for hybrid relay-reflecting intelligent surfaces
// Copyright (C) 2026 The hrris authors
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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hrris/beamforming.hpp"
#include "hrris/experiment.hpp"
#include "hrris/rate_metrics.hpp"
#include "hrris/relay.hpp"

using namespace hrris;

namespace
{

ChannelPair channels_for(int n)
{
    ExperimentSpec spec;
    spec.fading.surface_elements = n;
    spec.surface.n_elements = n;
    spec.k_values = {0};
    return trial_channels(spec, 0);
}

SurfaceConfig config_for(int n, int k, Architecture arch)
{
    SurfaceConfig cfg;
    cfg.n_elements = n;
    cfg.n_active_chains = k;
    cfg.architecture = arch;
    return cfg;
}

void BM_SpectralEfficiency(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    const ChannelPair ch = channels_for(n);
    const NoiseModel noise;
    const PowerModel pm;
    const CMat q = CMat::Identity(ch.n_tx(), ch.n_tx()) * (pm.bs_tx_power / ch.n_tx());
    const CoeffProfile p = CoeffProfile::passive(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(spectral_efficiency(ch.h1, ch.h2, p, q, noise, pm.bs_tx_power));
}
BENCHMARK(BM_SpectralEfficiency)->Arg(16)->Arg(100)->Arg(400);

void BM_WaterFillingGains(benchmark::State &state)
{
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> gains(static_cast<std::size_t>(state.range(0)));
    for (double &g : gains)
        g = expo(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(water_filling_gains(gains, 1.0));
}
BENCHMARK(BM_WaterFillingGains)->Arg(2)->Arg(8)->Arg(64);

void BM_OptimizePassive(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    const ChannelPair ch = channels_for(n);
    const SurfaceConfig cfg = config_for(n, 0, Architecture::fixed);
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_passive(ch, cfg, NoiseModel{}, PowerModel{}, AOConfig{}));
}
BENCHMARK(BM_OptimizePassive)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OptimizeFixed(benchmark::State &state)
{
    const ChannelPair ch = channels_for(100);
    const SurfaceConfig cfg = config_for(100, static_cast<int>(state.range(0)), Architecture::fixed);
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_fixed_hrris(ch, cfg, NoiseModel{}, PowerModel{}, AOConfig{}));
}
BENCHMARK(BM_OptimizeFixed)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_OptimizeDynamic(benchmark::State &state)
{
    const ChannelPair ch = channels_for(100);
    const SurfaceConfig cfg = config_for(100, static_cast<int>(state.range(0)), Architecture::dynamic);
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_dynamic_hrris(ch, cfg, NoiseModel{}, PowerModel{}, AOConfig{}));
}
BENCHMARK(BM_OptimizeDynamic)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Relay(benchmark::State &state)
{
    const int k = static_cast<int>(state.range(0));
    const ChannelPair ch = channels_for(100).elements(0, k);
    RelayConfig rc;
    rc.n_antennas = k;
    for (auto _ : state)
        benchmark::DoNotOptimize(relay_experiment(ch, rc, NoiseModel{}, PowerModel{}, AOConfig{}));
}
BENCHMARK(BM_Relay)->Arg(4)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_Trial(benchmark::State &state)
{
    ExperimentSpec spec;
    for (auto _ : state)
        for (Scheme s : spec.schemes)
            benchmark::DoNotOptimize(run_trial(spec, s, 4, 0));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
