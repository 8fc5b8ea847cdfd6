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
#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

#include "hrris/experiment.hpp"

namespace hrris::test
{

inline CMat random_cmat(int rows, int cols, Rng &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = scale * cdouble(g(rng), g(rng));
    return m;
}

/// Random Hermitian PSD matrix with the given trace.
inline CMat random_covariance(int n, double trace, Rng &rng)
{
    const CMat a = random_cmat(n, n, rng);
    CMat q = a * a.adjoint();
    return q * (trace / q.trace().real());
}

/// log2 det(I + C^-1 G q G^H) through a plain LU determinant.
inline double direct_rate(const CMat &g, const CMat &q, const CMat &c)
{
    const CMat m = CMat::Identity(c.rows(), c.cols()) + c.inverse() * g * q * g.adjoint();
    return std::log2(std::abs(m.determinant()));
}

/// Loop output power by plain fixed-point iteration p <- a2 (s + r + si p).
inline double iterate_loop(double a2, double s, double r, double si)
{
    double p = 0.0;
    for (int i = 0; i < 20000; ++i)
    {
        const double next = a2 * (s + r + si * p);
        if (std::abs(next - p) <= 1e-16 * std::abs(next))
            return next;
        p = next;
    }
    return p;
}

/// Surface SE assembled from scratch: iterated loop powers, explicit noise covariance,
/// direct determinant.
inline double oracle_se(const ChannelPair &ch, const CoeffProfile &p, const CMat &q, const NoiseModel &noise)
{
    const int nr = ch.n_rx();
    CMat c = CMat::Identity(nr, nr) * noise.receiver_noise();
    CVec coeffs(p.size());
    for (int n = 0; n < p.size(); ++n)
        coeffs(n) = std::polar(p.amplitudes[static_cast<std::size_t>(n)], p.phases[static_cast<std::size_t>(n)]);
    for (int n : p.active_set)
    {
        const double a2 = p.amplitudes[static_cast<std::size_t>(n)] * p.amplitudes[static_cast<std::size_t>(n)];
        const double s = (ch.h1.row(n) * q * ch.h1.row(n).adjoint())(0, 0).real();
        const double out = iterate_loop(a2, s, noise.active_noise(), noise.sigma_si2_surface);
        c += (out - a2 * s) * ch.h2.col(n) * ch.h2.col(n).adjoint();
    }
    const CMat g = ch.h2 * coeffs.asDiagonal() * ch.h1;
    return direct_rate(g, q, c);
}

// Passive capacity with the optimal covariance: eigen-gains of G^H G / sigma^2 and a
// water level found by bisection.
inline double passive_capacity(const CMat &g, double noise, double power)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(g.adjoint() * g / noise);
    std::vector<double> gains;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-14 * es.eigenvalues().maxCoeff())
            gains.push_back(es.eigenvalues()(i));
    if (gains.empty())
        return 0.0;
    double lo = 0.0, hi = power;
    for (double x : gains)
        hi = std::max(hi, power + 1.0 / x);
    for (int i = 0; i < 200; ++i)
    {
        const double mu = 0.5 * (lo + hi);
        double used = 0.0;
        for (double x : gains)
            used += std::max(0.0, mu - 1.0 / x);
        (used > power ? hi : lo) = mu;
    }
    double c = 0.0;
    for (double x : gains)
        c += std::log2(1.0 + x * std::max(0.0, 0.5 * (lo + hi) - 1.0 / x));
    return c;
}

struct Exhaustive
{
    double se = -1.0;
    std::vector<double> phases;
};

inline Exhaustive enumerate_passive(const ChannelPair &ch, int bits, double noise, double power)
{
    const PhaseCodebook book(bits);
    const int n = ch.n_elements();
    Exhaustive best;
    std::vector<std::size_t> code(static_cast<std::size_t>(n), 0);
    for (;;)
    {
        CVec d(n);
        std::vector<double> ph(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
        {
            ph[static_cast<std::size_t>(i)] = book[code[static_cast<std::size_t>(i)]];
            d(i) = std::polar(1.0, ph[static_cast<std::size_t>(i)]);
        }
        const double se = passive_capacity(ch.h2 * d.asDiagonal() * ch.h1, noise, power);
        if (se > best.se)
            best = {se, ph};
        int i = 0;
        while (i < n && ++code[static_cast<std::size_t>(i)] == book.size())
            code[static_cast<std::size_t>(i++)] = 0;
        if (i == n)
            break;
    }
    return best;
}

/// Default scenario shrunk to n surface elements.
inline ExperimentSpec small_spec(int n, int trials = 4)
{
    ExperimentSpec spec;
    spec.fading.surface_elements = n;
    spec.surface.n_elements = n;
    spec.surface.n_active_chains = std::min(spec.surface.n_active_chains, n);
    spec.k_values = {0, 1};
    spec.trials = trials;
    return spec;
}

inline SurfaceConfig passive_config(int n, int bits = 2)
{
    SurfaceConfig cfg;
    cfg.n_elements = n;
    cfg.n_active_chains = 0;
    cfg.phase_bits = bits;
    return cfg;
}

inline bool non_decreasing(const std::vector<double> &trace, double rel)
{
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1] - rel * std::abs(trace[i - 1]))
            return false;
    return true;
}

} // namespace hrris::test
