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

#include <vector>

#include "hrris/beamforming.hpp"
#include "hrris/channel_model.hpp"
#include "hrris/models.hpp"
#include "hrris/rate_metrics.hpp"

namespace hrris
{

struct RelayConfig
{
    int n_antennas = 4;                        // K
    double relay_power = 1e-3;                 // P_r, W (0 dBm)
    double sigma_si2 = 3.1622776601683794e-10; // -95 dB residual SI after suppression

    void validate() const;
};

/// Relay transmit power closing the SI loop for precoder W:
///   p = tr(W (h1r q h1r^H + sigma_r2 I) W^H) / (1 - sigma_si2 tr(W W^H)).
/// Throws UnstableLoopError when sigma_si2 tr(W W^H) >= 1.
double relay_output_power(const CMat &h1r, const CMat &w, const CMat &q, double sigma_r2, double sigma_si2);

/// SVD relay precoder W = V2 Gamma U1^H (K x K). Mode gains follow a water-filling split of
/// P_r over the product channel Sigma2 Sigma1 and are normalized so that
/// relay_output_power(W) == P_r.
CMat relay_precoder(const CMat &h1r, const CMat &h2r, const CMat &q, const RelayConfig &cfg, const NoiseModel &noise);

/// Noise covariance at the MS: sigma^2 I + h2r W (sigma_r2 + sigma_si2 p) W^H h2r^H.
CMat relay_noise_covariance(const CMat &h1r, const CMat &h2r, const CMat &w, const CMat &q, const NoiseModel &noise,
                            double sigma_si2);

/// log2 det(I + C_r^-1 (h2r W h1r) q (h2r W h1r)^H).
double relay_rate(const CMat &h1r, const CMat &h2r, const CMat &w, const CMat &q, const NoiseModel &noise,
                  double sigma_si2);

struct RelayResult
{
    RateResult rate;
    CMat w;
    CMat q;
    std::vector<double> trace;
};

/// BS covariance water-filled against the relay-induced noise, with the same monotone guard
/// as the surface optimizers, alternating with the SVD precoder.
RelayResult relay_experiment(const ChannelPair &relay_channels, const RelayConfig &cfg, const NoiseModel &noise,
                             const PowerModel &pm, const AOConfig &ao);

} // namespace hrris
