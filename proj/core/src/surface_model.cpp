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

#include "hrris/surface_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hrris
{

void NoiseModel::validate() const
{
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("NoiseModel: bandwidth must be > 0");
    if (!std::isfinite(noise_psd_dbm_hz))
        throw std::invalid_argument("NoiseModel: noise PSD must be finite");
    if (sigma_r2 && !(*sigma_r2 >= 0.0))
        throw std::invalid_argument("NoiseModel: sigma_r2 must be >= 0");
    for (double g : {sigma_si2_surface, sigma_si2_relay})
        if (!(g >= 0.0 && g < 1.0))
            throw std::invalid_argument("NoiseModel: SI gains must lie in [0, 1)");
}

void PowerModel::validate() const
{
    if (!(pa_efficiency > 0.0 && pa_efficiency <= 1.0))
        throw std::invalid_argument("PowerModel: PA efficiency must lie in (0, 1]");
    for (double w : {bs_tx_power, bs_circuit, ms_circuit, passive_element, active_element_circuit, relay_element})
        if (!(w >= 0.0))
            throw std::invalid_argument("PowerModel: powers must be >= 0");
}

void SurfaceConfig::validate() const
{
    if (n_elements < 1)
        throw std::invalid_argument("SurfaceConfig: N must be >= 1");
    if (n_active_chains < 0 || n_active_chains > n_elements)
        throw std::invalid_argument("SurfaceConfig: K must lie in [0, N]");
    if (phase_bits < 1 || phase_bits > 16)
        throw std::invalid_argument("SurfaceConfig: phase_bits must lie in [1, 16]");
    if (!(active_power_budget >= 0.0))
        throw std::invalid_argument("SurfaceConfig: active power budget must be >= 0");
    if (!active_indices.empty())
    {
        if (static_cast<int>(active_indices.size()) != n_active_chains)
            throw std::invalid_argument("SurfaceConfig: fixed active set must contain exactly K indices");
        std::vector<int> sorted = active_indices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("SurfaceConfig: fixed active indices must be distinct");
        if (sorted.front() < 0 || sorted.back() >= n_elements)
            throw std::invalid_argument("SurfaceConfig: fixed active index outside [0, N)");
    }
}

std::vector<int> SurfaceConfig::fixed_indices() const
{
    if (!active_indices.empty())
    {
        std::vector<int> idx = active_indices;
        std::sort(idx.begin(), idx.end());
        return idx;
    }
    std::vector<int> idx(static_cast<std::size_t>(n_active_chains));
    for (int k = 0; k < n_active_chains; ++k)
        idx[static_cast<std::size_t>(k)] = k;
    return idx;
}

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits)
{
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("PhaseCodebook: bits must lie in [1, 16]");
    const std::size_t levels = std::size_t{1} << bits;
    values_.resize(levels);
    for (std::size_t i = 0; i < levels; ++i)
        values_[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(levels);
}

double PhaseCodebook::quantize(double theta) const
{
    if (!std::isfinite(theta))
        throw std::invalid_argument("PhaseCodebook::quantize: non-finite phase");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(theta, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;

    double best = values_.front();
    double best_dist = two_pi;
    for (double v : values_)
    {
        double d = std::abs(wrapped - v);
        d = std::min(d, two_pi - d);
        if (d < best_dist) // strict: ties keep the smaller value seen first
        {
            best_dist = d;
            best = v;
        }
    }
    return best;
}

bool PhaseCodebook::contains(double theta) const
{
    return std::find(values_.begin(), values_.end(), theta) != values_.end();
}

CoeffProfile CoeffProfile::passive(int n, double phase)
{
    CoeffProfile p;
    p.amplitudes.assign(static_cast<std::size_t>(n), 1.0);
    p.phases.assign(static_cast<std::size_t>(n), phase);
    return p;
}

bool CoeffProfile::is_active(int n) const
{
    return std::binary_search(active_set.begin(), active_set.end(), n);
}

cdouble CoeffProfile::coefficient(int n) const
{
    const auto i = static_cast<std::size_t>(n);
    return std::polar(amplitudes[i], phases[i]);
}

CVec CoeffProfile::coefficients() const
{
    CVec c(size());
    for (int n = 0; n < size(); ++n)
        c(n) = coefficient(n);
    return c;
}

void CoeffProfile::validate(const PhaseCodebook *book, int max_active) const
{
    if (amplitudes.size() != phases.size())
        throw std::invalid_argument("CoeffProfile: amplitude and phase lengths differ");
    if (!std::is_sorted(active_set.begin(), active_set.end()) ||
        std::adjacent_find(active_set.begin(), active_set.end()) != active_set.end())
        throw std::invalid_argument("CoeffProfile: active set must be sorted and distinct");
    if (!active_set.empty() && (active_set.front() < 0 || active_set.back() >= size()))
        throw std::invalid_argument("CoeffProfile: active index out of range");
    if (max_active >= 0 && static_cast<int>(active_set.size()) > max_active)
        throw std::invalid_argument("CoeffProfile: more active elements than RF-PA chains");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int n = 0; n < size(); ++n)
    {
        const auto i = static_cast<std::size_t>(n);
        if (!(amplitudes[i] >= 0.0) || !std::isfinite(amplitudes[i]))
            throw std::invalid_argument("CoeffProfile: amplitude of element " + std::to_string(n) +
                                        " must be finite and >= 0");
        if (!(phases[i] >= 0.0 && phases[i] < two_pi))
            throw std::invalid_argument("CoeffProfile: phase of element " + std::to_string(n) +
                                        " outside [0, 2pi)");
        if (!is_active(n) && amplitudes[i] != 1.0)
            throw std::invalid_argument("CoeffProfile: passive element " + std::to_string(n) +
                                        " must have unit amplitude");
        if (book && !book->contains(phases[i]))
            throw std::invalid_argument("CoeffProfile: phase of element " + std::to_string(n) +
                                        " is not a codebook value");
    }
}

CMat coeff_matrix(const CoeffProfile &p)
{
    p.validate();
    return p.coefficients().asDiagonal();
}

double element_output_power(double alpha, double incident_power, double sigma_r2, double sigma_si2)
{
    const double a2 = alpha * alpha;
    const double loop = a2 * sigma_si2;
    if (loop >= 1.0)
        throw UnstableLoopError("active element loop unstable: alpha^2 * sigma_si^2 = " + std::to_string(loop));
    return a2 * (incident_power + sigma_r2) / (1.0 - loop);
}

double amplitude_for_output_power(double power, double incident_power, double sigma_r2, double sigma_si2)
{
    if (power <= 0.0)
        return 0.0;
    return std::sqrt(power / (incident_power + sigma_r2 + power * sigma_si2));
}

BudgetReport budget_check(const CoeffProfile &p, std::span<const double> incident_powers, const NoiseModel &noise,
                          const SurfaceConfig &cfg)
{
    if (static_cast<int>(incident_powers.size()) != p.size())
        throw std::invalid_argument("budget_check: incident power count does not match the profile");
    BudgetReport r;
    const double sigma_r2 = noise.active_noise();
    for (int n : p.active_set)
    {
        const auto i = static_cast<std::size_t>(n);
        const double out = element_output_power(p.amplitudes[i], incident_powers[i], sigma_r2, noise.sigma_si2_surface);
        r.total_active_power += out;
        r.max_element_power = std::max(r.max_element_power, out);
    }
    const double limit = cfg.active_power_budget * (1.0 + budget_tolerance);
    r.feasible = cfg.budget_mode == BudgetMode::total ? r.total_active_power <= limit : r.max_element_power <= limit;
    return r;
}

} // namespace hrris
