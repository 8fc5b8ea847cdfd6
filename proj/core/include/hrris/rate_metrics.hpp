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

#include <span>
#include <vector>

#include "hrris/channel_model.hpp"
#include "hrris/models.hpp"
#include "hrris/surface_model.hpp"

namespace hrris
{

/// Per-trial link metrics.
struct RateResult
{
    double se = 0.0;          // bits/s/Hz
    double ee = 0.0;          // bits/J
    double ee_per_hz = 0.0;   // bits/s/Hz/W
    double total_power = 0.0; // W
    int iterations = 0;
    bool converged = false;
};

/// Incident power at each surface element, s_n = [h1 q h1^H]_nn.
std::vector<double> incident_powers(const CMat &h1, const CMat &q);

/// Receiver noise covariance including the amplified noise and SI of active elements:
///   C = sigma^2 I + sum_{n in A} (p_n - alpha_n^2 s_n) h2_n h2_n^H.
CMat noise_covariance(const CMat &h2, const CoeffProfile &p, std::span<const double> incident, const NoiseModel &noise);

/// log2 det(I + C^-1 G q G^H) with G = h2 diag(c) h1 and C from noise_covariance.
/// `power_limit` bounds trace(q) (relative tolerance 1e-9).
double spectral_efficiency(const CMat &h1, const CMat &h2, const CoeffProfile &p, const CMat &q,
                           const NoiseModel &noise, double power_limit);

/// log2 det(I + C^-1 G q G^H) for an arbitrary effective channel and noise covariance.
double log_det_rate(const CMat &g, const CMat &q, const CMat &noise_cov);

struct WaterFilling
{
    CMat covariance;               // Nt x Nt, trace == power
    std::vector<double> gains;     // whitened eigen-gains lambda_i, descending
    std::vector<double> allocation; // p_i per mode
    double water_level = 0.0;      // mu
    bool zero_channel = false;
};

/// Water-filling over eigen-gains with unit effective noise: p_i = max(0, mu - 1/lambda_i),
/// sum p_i = power. Gains may be in any order; the allocation follows the input order.
/// Zero gains receive nothing; all-zero gains set zero_channel.
WaterFilling water_filling_gains(std::span<const double> gains, double power);

/// Capacity-achieving transmit covariance of `channel` under colored noise `noise_cov`.
WaterFilling water_filling(const CMat &channel, const CMat &noise_cov, double power);

/// sum_i log2(1 + lambda_i p_i).
double mode_capacity(std::span<const double> gains, std::span<const double> allocation);

enum class HardwareKind
{
    ris,
    hrris,
    relay
};

/// Total consumed power: BS PA input, circuits, per-element consumption and the
/// surface/relay radiated power through the PA efficiency.
double total_power_consumption(HardwareKind kind, int n_passive, int n_active, double active_radiated,
                               const PowerModel &pm);

double energy_efficiency(double se, double bandwidth_hz, double total_power);

} // namespace hrris
