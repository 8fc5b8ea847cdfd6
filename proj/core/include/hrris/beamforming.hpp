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
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hrris/channel_model.hpp"
#include "hrris/models.hpp"
#include "hrris/rate_metrics.hpp"
#include "hrris/surface_model.hpp"

namespace hrris
{

enum class InitKind
{
    all_zero_phase,
    random_phase
};

/// Alternating-optimization loop controls.
struct AOConfig
{
    int max_outer_iters = 30;
    double rel_tolerance = 1e-6;
    int amplitude_grid = 8;  // points of the coarse 1-D amplitude search
    int golden_iters = 24;   // golden-section refinement steps after the grid
    int restarts = 0;        // additional random-phase starts
    InitKind init = InitKind::all_zero_phase;
    std::uint64_t seed = 0;  // drives random-phase starts

    void validate() const;
};

/// Surface coefficients together with the BS transmit covariance they were scored with.
struct OptState
{
    CoeffProfile profile;
    CMat q;
    double se = 0.0;
};

struct OptResult
{
    CoeffProfile profile;
    CMat q;
    double se = 0.0;
    std::vector<double> trace; // objective after initialization and after every outer iteration
    bool converged = false;
    int iterations = 0;
    double active_power = 0.0; // total radiated by active elements (W)
};

class SearchSpaceTooLarge : public std::length_error
{
  public:
    using std::length_error::length_error;
};

/// Passive RIS: coordinate ascent over codebook phases with unit amplitudes.
/// `init`, when given, replaces the configured starting point of the first run (its q
/// may be empty, meaning isotropic).
OptResult optimize_passive(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                           const PowerModel &pm, const AOConfig &ao, const OptState *init = nullptr);

/// Fixed HR-RIS: the same sweep, with each codebook phase of an active-capable element
/// paired with a 1-D amplitude search. Reduces to optimize_passive when no element can be
/// active (K = 0 or P_a = 0).
OptResult optimize_fixed_hrris(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                               const PowerModel &pm, const AOConfig &ao, const OptState *init = nullptr);

/// First phase of the dynamic architecture: every element amplitude-free under P_a.
OptResult dynamic_unrestricted(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                               const PowerModel &pm, const AOConfig &ao, const OptState *init = nullptr);

/// Activation rule: amplitude > 1, at most k, largest first, ties to the lower index.
/// Returns the sorted selection.
std::vector<int> select_active(std::span<const double> amplitudes, int k);

/// Second and third phases: select from an unrestricted solution, then refine the
/// selected set as a fixed HR-RIS.
OptResult dynamic_refine(const OptResult &unrestricted, const ChannelPair &channels, const SurfaceConfig &cfg,
                         const NoiseModel &noise, const PowerModel &pm, const AOConfig &ao,
                         const OptState *passive_init = nullptr);

/// Dynamic HR-RIS: dynamic_unrestricted followed by dynamic_refine.
OptResult optimize_dynamic_hrris(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                                 const PowerModel &pm, const AOConfig &ao, const OptState *init = nullptr);

struct QUpdate
{
    OptState state;
    bool accepted = false;
};

/// Water-fill the BS covariance against the noise covariance induced by the current
/// profile, shrink active amplitudes if the new incident powers break the budget, and
/// keep the candidate only if the self-consistent SE does not drop.
QUpdate guarded_q_update(const OptState &current, const ChannelPair &channels, const NoiseModel &noise,
                         const SurfaceConfig &cfg, double bs_power);

/// Exhaustive search over codebook phases (and, on cfg.fixed_indices(), the options
/// {passive} + amplitude_grid fractions of the full-budget amplitude). Passive instances
/// use the exact water-filling covariance per profile.
OptResult brute_force_oracle(const ChannelPair &channels, const SurfaceConfig &cfg, const NoiseModel &noise,
                             const PowerModel &pm, int amplitude_grid = 16);

/// Active radiated power of a profile under the covariance it is scored with.
double radiated_active_power(const CoeffProfile &p, const ChannelPair &channels, const CMat &q,
                             const NoiseModel &noise);

} // namespace hrris
