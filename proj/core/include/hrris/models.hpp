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

#include <cmath>
#include <optional>

namespace hrris
{

/// Thermal floor and self-interference levels shared by the surface, the relay and the
/// receiver.
struct NoiseModel
{
    double noise_psd_dbm_hz = -170.0;
    double bandwidth_hz = 10e6;

    /// Input noise of an active element or relay antenna (W). Defaults to PSD x bandwidth.
    std::optional<double> sigma_r2;

    double sigma_si2_surface = 1e-7;             // -70 dB
    double sigma_si2_relay = 3.1622776601683794e-10; // -95 dB

    /// Receiver noise power sigma^2 (W).
    double receiver_noise() const
    {
        return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0) * bandwidth_hz;
    }

    double active_noise() const { return sigma_r2.value_or(receiver_noise()); }

    void validate() const; // throws std::invalid_argument
};

/// Transmit and circuit power ledger (W).
struct PowerModel
{
    double bs_tx_power = 0.1; // 20 dBm
    double pa_efficiency = 0.5;
    double bs_circuit = 1.0;
    double ms_circuit = 0.1;
    double passive_element = 5e-3;
    double active_element_circuit = 20e-3;
    double relay_element = 100e-3;

    void validate() const;
};

} // namespace hrris
