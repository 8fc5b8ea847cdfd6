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

#include "hrris/rate_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hrris
{

namespace
{

constexpr double ln2 = 0.69314718055994530942;

void check_covariance(const CMat &q, double power_limit)
{
    if (q.rows() != q.cols())
        throw std::invalid_argument("transmit covariance must be square");
    const double scale = std::max(power_limit, q.cwiseAbs().maxCoeff());
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("transmit covariance must be Hermitian");
    const double trace = q.trace().real();
    if (trace > power_limit * (1.0 + 1e-9) + 1e-300)
        throw std::invalid_argument("transmit covariance exceeds the power limit");
    if (q.size() > 0)
    {
        Eigen::SelfAdjointEigenSolver<CMat> eig(q, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(trace, 1e-300))
            throw std::invalid_argument("transmit covariance must be positive semidefinite");
    }
}

} // namespace

std::vector<double> incident_powers(const CMat &h1, const CMat &q)
{
    const CMat hq = h1 * q;
    std::vector<double> s(static_cast<std::size_t>(h1.rows()));
    for (Eigen::Index n = 0; n < h1.rows(); ++n)
        s[static_cast<std::size_t>(n)] = std::max(0.0, hq.row(n).dot(h1.row(n)).real());
    return s;
}

CMat noise_covariance(const CMat &h2, const CoeffProfile &p, std::span<const double> incident, const NoiseModel &noise)
{
    if (h2.cols() != p.size() || static_cast<int>(incident.size()) != p.size())
        throw std::invalid_argument("noise_covariance: dimension mismatch");
    const double sigma_r2 = noise.active_noise();
    CMat c = CMat::Identity(h2.rows(), h2.rows()) * noise.receiver_noise();
    for (int n : p.active_set)
    {
        const auto i = static_cast<std::size_t>(n);
        const double a2 = p.amplitudes[i] * p.amplitudes[i];
        const double out = element_output_power(p.amplitudes[i], incident[i], sigma_r2, noise.sigma_si2_surface);
        // Noise + SI share of the element output: alpha^2 (sigma_r2 + sigma_si2 * p).
        const double share = a2 * (sigma_r2 + noise.sigma_si2_surface * out);
        c.noalias() += share * h2.col(n) * h2.col(n).adjoint();
    }
    return c;
}

double log_det_rate(const CMat &g, const CMat &q, const CMat &noise_cov)
{
    Eigen::LLT<CMat> chol(noise_cov);
    if (chol.info() != Eigen::Success)
        throw std::domain_error("noise covariance is singular or not positive definite");
    const CMat y = chol.matrixL().solve(g);
    CMat m = y * q * y.adjoint();
    m.diagonal().array() += 1.0;
    Eigen::LLT<CMat> mc(m);
    if (mc.info() != Eigen::Success)
        throw std::domain_error("log_det_rate: I + C^-1 G q G^H is not positive definite");
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        logdet += std::log(mc.matrixLLT()(i, i).real());
    return std::max(0.0, 2.0 * logdet / ln2);
}

double spectral_efficiency(const CMat &h1, const CMat &h2, const CoeffProfile &p, const CMat &q,
                           const NoiseModel &noise, double power_limit)
{
    if (h1.rows() != p.size() || h2.cols() != p.size() || q.rows() != h1.cols())
        throw std::invalid_argument("spectral_efficiency: dimension mismatch");
    if (!(noise.receiver_noise() > 0.0))
        throw std::domain_error("spectral_efficiency: receiver noise must be > 0");
    check_covariance(q, power_limit);
    const std::vector<double> s = incident_powers(h1, q);
    const CMat c = noise_covariance(h2, p, s, noise);
    const CMat g = h2 * p.coefficients().asDiagonal() * h1;
    return log_det_rate(g, q, c);
}

WaterFilling water_filling_gains(std::span<const double> gains, double power)
{
    if (!(power > 0.0))
        throw std::invalid_argument("water_filling: power must be > 0");
    WaterFilling wf;
    wf.gains.assign(gains.begin(), gains.end());
    wf.allocation.assign(gains.size(), 0.0);

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < gains.size(); ++i)
        if (gains[i] > 0.0 && std::isfinite(gains[i]))
            order.push_back(i);
    if (order.empty())
    {
        wf.zero_channel = true;
        return wf;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

    // Largest m whose water level clears the weakest included mode.
    double inv_sum = 0.0;
    double mu = 0.0;
    std::size_t used = 0;
    for (std::size_t m = 0; m < order.size(); ++m)
    {
        const double inv = 1.0 / gains[order[m]];
        const double level = (power + inv_sum + inv) / static_cast<double>(m + 1);
        if (level <= inv)
            break;
        inv_sum += inv;
        mu = level;
        used = m + 1;
    }
    for (std::size_t m = 0; m < used; ++m)
        wf.allocation[order[m]] = std::max(0.0, mu - 1.0 / gains[order[m]]);
    wf.water_level = mu;
    return wf;
}

WaterFilling water_filling(const CMat &channel, const CMat &noise_cov, double power)
{
    if (noise_cov.rows() != channel.rows() || noise_cov.cols() != channel.rows())
        throw std::invalid_argument("water_filling: noise covariance dimension mismatch");
    Eigen::SelfAdjointEigenSolver<CMat> eig(noise_cov);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
        throw std::domain_error("water_filling: noise covariance must be positive definite");
    const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
    const CMat whitener = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
    const CMat gw = whitener * channel;

    Eigen::JacobiSVD<CMat> svd(gw, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    std::vector<double> gains(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        gains[static_cast<std::size_t>(i)] = sv(i) * sv(i);

    WaterFilling wf = water_filling_gains(gains, power);
    const Eigen::Index nt = channel.cols();
    wf.covariance = CMat::Zero(nt, nt);
    if (wf.zero_channel)
        return wf;
    const CMat &v = svd.matrixV();
    for (std::size_t i = 0; i < wf.allocation.size(); ++i)
        if (wf.allocation[i] > 0.0)
        {
            const auto col = static_cast<Eigen::Index>(i);
            wf.covariance.noalias() += wf.allocation[i] * v.col(col) * v.col(col).adjoint();
        }
    // Exact Hermitian symmetry for downstream checks.
    wf.covariance = 0.5 * (wf.covariance + wf.covariance.adjoint()).eval();
    return wf;
}

double mode_capacity(std::span<const double> gains, std::span<const double> allocation)
{
    if (gains.size() != allocation.size())
        throw std::invalid_argument("mode_capacity: size mismatch");
    double c = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i)
        c += std::log2(1.0 + gains[i] * allocation[i]);
    return c;
}

double total_power_consumption(HardwareKind kind, int n_passive, int n_active, double active_radiated,
                               const PowerModel &pm)
{
    if (n_passive < 0 || n_active < 0)
        throw std::invalid_argument("total_power_consumption: counts must be >= 0");
    const double per_active = kind == HardwareKind::relay ? pm.relay_element : pm.active_element_circuit;
    return pm.bs_tx_power / pm.pa_efficiency + pm.bs_circuit + pm.ms_circuit + n_passive * pm.passive_element +
           n_active * per_active + active_radiated / pm.pa_efficiency;
}

double energy_efficiency(double se, double bandwidth_hz, double total_power)
{
    if (!(total_power > 0.0))
        throw std::invalid_argument("energy_efficiency: total power must be > 0");
    return bandwidth_hz * se / total_power;
}

} // namespace hrris
