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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrris/beamforming.hpp"
#include "hrris/channel_model.hpp"
#include "hrris/models.hpp"
#include "hrris/rate_metrics.hpp"
#include "hrris/relay.hpp"
#include "hrris/surface_model.hpp"

namespace hrris
{

enum class Scheme
{
    ris_n,         // passive RIS with all N elements
    ris_n_minus_k, // passive RIS keeping only the N-K passive elements of the fixed HR-RIS
    hrris_fixed,
    hrris_dynamic,
    relay // FD-AF relay with K antennas at the surface position
};

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name); // throws std::invalid_argument
const std::vector<Scheme> &all_schemes();

/// Full scenario description. Per-row K overrides surface.n_active_chains and
/// relay.n_antennas.
struct ExperimentSpec
{
    Geometry geometry;
    FadingSpec fading;
    PathLossModel path_loss;
    NoiseModel noise;
    PowerModel power;
    SurfaceConfig surface;
    RelayConfig relay;
    AOConfig ao;

    std::vector<Scheme> schemes = all_schemes();
    std::vector<int> k_values = {1, 4, 10, 20};
    int trials = 500;
    std::uint64_t master_seed = 1;
    bool equal_power_mode = false;
    bool aggregate_medians = false;

    void validate() const;
};

struct TrialResult
{
    Scheme scheme = Scheme::ris_n;
    int n = 0; // elements (or relay antennas) used by the scheme
    int k = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double se = 0.0;
    double ee = 0.0;
    double total_power = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string flags; // ';'-separated events
    double bs_power = 0.0;
    bool failed = false;
};

/// BS transmit power a scheme uses so that its total consumption matches the HR-RIS
/// reference. Floored at zero.
struct PowerAdjustment
{
    double bs_power = 0.0;
    bool floored = false;
};

PowerAdjustment apply_equal_power_mode(const ExperimentSpec &spec, double reference_total, double scheme_total);

/// Scheme whose total consumption the other schemes are equalized to (dynamic HR-RIS when
/// requested, else fixed). Empty when the spec carries neither.
std::optional<Scheme> equal_power_reference(const ExperimentSpec &spec);

/// Channel realization of a trial; every scheme consumes (a slice of) it.
ChannelPair trial_channels(const ExperimentSpec &spec, int trial_index);
std::uint64_t trial_seed(const ExperimentSpec &spec, int trial_index);

TrialResult run_trial(const ExperimentSpec &spec, Scheme scheme, int k, int trial_index);

struct Aggregate
{
    Scheme scheme = Scheme::ris_n;
    int n = 0;
    int k = 0;
    int count = 0;
    int failed = 0;
    double se_mean = 0.0;
    double se_stderr = 0.0;
    double ee_mean = 0.0;
    double ee_stderr = 0.0;
    double p_total_mean = 0.0;
    std::optional<double> se_median;
    std::optional<double> ee_median;
};

struct SweepResult
{
    std::vector<TrialResult> rows;      // sorted by (scheme, k, trial)
    std::vector<Aggregate> aggregates;  // one per (scheme, k)
};

/// Every (scheme, k, trial). `threads` <= 0 uses the hardware concurrency.
SweepResult run_sweep(const ExperimentSpec &spec, int threads = 1);

std::vector<Aggregate> aggregate(const std::vector<TrialResult> &rows, bool medians);

/// Mean and standard error of the per-trial difference metric(a) - metric(b).
struct PairedStats
{
    int count = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

enum class Metric
{
    se,
    ee,
    total_power
};

PairedStats paired_difference(const std::vector<TrialResult> &rows, Scheme a, Scheme b, int k, Metric metric);
double mean_metric(const std::vector<TrialResult> &rows, Scheme s, int k, Metric metric);

// CSV emission.
inline constexpr std::string_view csv_header =
    "scheme,n,k,trial,seed,se_bps_hz,ee_bits_per_joule,p_total_w,iters,converged,flags";

std::filesystem::path aggregate_path(const std::filesystem::path &rows_path);
void write_results(const std::vector<TrialResult> &rows, const std::filesystem::path &path);
void write_aggregates(const std::vector<Aggregate> &aggs, const std::filesystem::path &path);
void write_results(const SweepResult &sweep, const std::filesystem::path &path); // rows + sibling .agg.csv
std::vector<TrialResult> read_results(const std::filesystem::path &path);

// Structured configuration (JSON). Unknown keys are rejected.
ExperimentSpec parse_spec(std::string_view text);
std::string dump_spec(const ExperimentSpec &spec);
ExperimentSpec load_spec(const std::filesystem::path &path);

/// Coordinate ascent against exhaustive search on small passive surfaces drawn from the
/// spec's scenario with n elements and b-bit phases.
struct OracleReport
{
    int instances = 0;
    int matches = 0;  // within 1e-9 relative of the oracle
    int exceeded = 0; // optimizer above the oracle by more than 1e-9 relative
    double median_gap = 0.0; // relative
    double max_gap = 0.0;
    double seconds = 0.0;
};

OracleReport run_oracle_suite(const ExperimentSpec &spec, int n, int b, int instances = 100, int restarts = 4);

std::string version_string();

} // namespace hrris
