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

#include "hrris/relay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hrris
{

void RelayConfig::validate() const
{
    if (n_antennas < 1)
        throw std::invalid_argument("RelayConfig: K must be >= 1");
    if (!(relay_power >= 0.0))
        throw std::invalid_argument("RelayConfig: relay power must be >= 0");
    if (!(sigma_si2 >= 0.0 && sigma_si2 < 1.0))
        throw std::invalid_argument("RelayConfig: SI gain must lie in [0, 1)");
}

namespace
{

CMat relay_input_covariance(const CMat &h1r, const CMat &q, double sigma_r2)
{
    CMat r = h1r * q * h1r.adjoint();
    r.diagonal().array() += sigma_r2;
    return r;
}

} // namespace

double relay_output_power(const CMat &h1r, const CMat &w, const CMat &q, double sigma_r2, double sigma_si2)
{
    const CMat r = relay_input_covariance(h1r, q, sigma_r2);
    const double drive = (w * r * w.adjoint()).trace().real();
    const double loop = sigma_si2 * w.squaredNorm();
    if (loop >= 1.0)
        throw UnstableLoopError("relay loop unstable: sigma_si2 * ||W||^2 = " + std::to_string(loop));
    return drive / (1.0 - loop);
}

CMat relay_precoder(const CMat &h1r, const CMat &h2r, const CMat &q, const RelayConfig &cfg, const NoiseModel &noise)
{
    cfg.validate();
    const Eigen::Index k = h1r.rows();
    if (h2r.cols() != k)
        throw std::invalid_argument("relay_precoder: hop dimensions disagree on K");
    if (!h1r.allFinite() || !h2r.allFinite())
        throw std::invalid_argument("relay_precoder: non-finite channel");

    Eigen::JacobiSVD<CMat> svd1(h1r, Eigen::ComputeFullU);
    Eigen::JacobiSVD<CMat> svd2(h2r, Eigen::ComputeFullV);
    const Eigen::VectorXd &s1 = svd1.singularValues();
    const Eigen::VectorXd &s2 = svd2.singularValues();

    const double sigma_r2 = noise.active_noise();
    const double sigma2 = noise.receiver_noise();
    const double tx_per_antenna = q.trace().real() / static_cast<double>(h1r.cols());

    // Strongest input mode feeds the strongest output mode.
    std::vector<double> gains(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < std::min(s1.size(), s2.size()); ++i)
        gains[static_cast<std::size_t>(i)] =
            (s1(i) * s1(i)) * (s2(i) * s2(i)) * tx_per_antenna / (std::max(sigma_r2, 1e-300) * sigma2);

    if (!(cfg.relay_power > 0.0))
        return CMat::Zero(k, k);
    const WaterFilling split = water_filling_gains(gains, cfg.relay_power);
    if (split.zero_channel)
        throw std::domain_error("relay_precoder: zero channel");

    const CMat r = relay_input_covariance(h1r, q, sigma_r2);
    const CMat &u1 = svd1.matrixU();
    const CMat &v2 = svd2.matrixV();
    Eigen::VectorXd mode_gain = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i)
    {
        const double p_i = split.allocation[static_cast<std::size_t>(i)];
        if (p_i <= 0.0)
            continue;
        const double in = u1.col(i).dot(r * u1.col(i)).real();
        mode_gain(i) = std::sqrt(p_i / in);
    }
    const CMat w0 = v2 * mode_gain.cast<cdouble>().asDiagonal() * u1.adjoint();

    // Scale so the SI fixed point lands exactly on P_r.
    const double drive = (w0 * r * w0.adjoint()).trace().real();
    const double scale2 = cfg.relay_power / (drive + cfg.relay_power * cfg.sigma_si2 * w0.squaredNorm());
    return std::sqrt(scale2) * w0;
}

CMat relay_noise_covariance(const CMat &h1r, const CMat &h2r, const CMat &w, const CMat &q, const NoiseModel &noise,
                            double sigma_si2)
{
    const double sigma_r2 = noise.active_noise();
    const double p = relay_output_power(h1r, w, q, sigma_r2, sigma_si2);
    const CMat hw = h2r * w;
    CMat c = (sigma_r2 + sigma_si2 * p) * (hw * hw.adjoint());
    c.diagonal().array() += noise.receiver_noise();
    return c;
}

double relay_rate(const CMat &h1r, const CMat &h2r, const CMat &w, const CMat &q, const NoiseModel &noise,
                  double sigma_si2)
{
    if (!(noise.receiver_noise() > 0.0))
        throw std::domain_error("relay_rate: receiver noise must be > 0");
    const CMat c = relay_noise_covariance(h1r, h2r, w, q, noise, sigma_si2);
    return log_det_rate(h2r * w * h1r, q, c);
}

RelayResult relay_experiment(const ChannelPair &relay_channels, const RelayConfig &cfg, const NoiseModel &noise,
                             const PowerModel &pm, const AOConfig &ao)
{
    cfg.validate();
    ao.validate();
    const CMat &h1r = relay_channels.h1;
    const CMat &h2r = relay_channels.h2;
    if (h1r.rows() != cfg.n_antennas)
        throw std::invalid_argument("relay_experiment: channel has " + std::to_string(h1r.rows()) +
                                    " relay antennas, config says " + std::to_string(cfg.n_antennas));
    const double power = pm.bs_tx_power;
    const auto nt = h1r.cols();

    RelayResult res;
    res.q = CMat::Identity(nt, nt) * cdouble(power / static_cast<double>(nt), 0.0);
    res.w = relay_precoder(h1r, h2r, res.q, cfg, noise);
    double se = relay_rate(h1r, h2r, res.w, res.q, noise, cfg.sigma_si2);
    res.trace.push_back(se);

    int it = 0;
    bool converged = false;
    for (it = 1; it <= ao.max_outer_iters; ++it)
    {
        const double prev = se;
        const CMat c = relay_noise_covariance(h1r, h2r, res.w, res.q, noise, cfg.sigma_si2);
        const WaterFilling wf = water_filling(h2r * res.w * h1r, c, power);
        if (!wf.zero_channel)
        {
            const CMat w_c = relay_precoder(h1r, h2r, wf.covariance, cfg, noise);
            const double se_c = relay_rate(h1r, h2r, w_c, wf.covariance, noise, cfg.sigma_si2);
            if (se_c >= se)
            {
                se = se_c;
                res.q = wf.covariance;
                res.w = w_c;
            }
        }
        res.trace.push_back(se);
        if ((se - prev) <= ao.rel_tolerance * std::max(std::abs(prev), std::numeric_limits<double>::min()))
        {
            converged = true;
            break;
        }
    }

    res.rate.se = se;
    res.rate.iterations = std::min(it, ao.max_outer_iters);
    res.rate.converged = converged;
    res.rate.total_power = total_power_consumption(HardwareKind::relay, 0, cfg.n_antennas, cfg.relay_power, pm);
    res.rate.ee = energy_efficiency(se, noise.bandwidth_hz, res.rate.total_power);
    res.rate.ee_per_hz = se / res.rate.total_power;
    return res;
}

} // namespace hrris
