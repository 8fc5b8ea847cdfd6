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

#include <doctest.h>

#include <cmath>

#include "hrris/relay.hpp"
#include "support.hpp"

using namespace hrris;

namespace
{

NoiseModel unit_noise()
{
    NoiseModel n;
    n.noise_psd_dbm_hz = 30.0;
    n.bandwidth_hz = 1.0;
    return n;
}

ChannelPair relay_channels(int k, int trial)
{
    ExperimentSpec spec = test::small_spec(20);
    return trial_channels(spec, trial).elements(0, k);
}

} // namespace

TEST_SUITE("relay")
{

TEST_CASE("single antenna gain solves the scalar budget")
{
    const NoiseModel noise;
    RelayConfig cfg;
    cfg.n_antennas = 1;
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial)
    {
        const ChannelPair ch = relay_channels(1, trial);
        const CMat q = test::random_covariance(8, 0.1, rng);
        const CMat w = relay_precoder(ch.h1, ch.h2, q, cfg, noise);
        REQUIRE(w.rows() == 1);
        const double s = (ch.h1 * q * ch.h1.adjoint())(0, 0).real();
        const double beta2 = std::norm(w(0, 0));
        const double p = test::iterate_loop(beta2, s, noise.active_noise(), cfg.sigma_si2);
        CHECK(p == doctest::Approx(cfg.relay_power).epsilon(1e-9));
        CHECK(beta2 * (s + noise.active_noise() + cfg.sigma_si2 * cfg.relay_power) ==
              doctest::Approx(cfg.relay_power).epsilon(1e-12));
    }
}

TEST_CASE("orthonormal hops give a scaled unitary precoder")
{
    NoiseModel noise = unit_noise();
    RelayConfig cfg;
    cfg.n_antennas = 2;
    cfg.relay_power = 3.0;
    cfg.sigma_si2 = 0.01;
    const CMat eye = CMat::Identity(2, 2);
    const CMat w = relay_precoder(eye, eye, eye, cfg, noise);
    const CMat wwh = w * w.adjoint();
    const double scale = wwh(0, 0).real();
    CHECK(scale > 0.0);
    CHECK((wwh - eye * scale).norm() < 1e-12 * scale);
}

TEST_CASE("power constraint on random channels")
{
    const NoiseModel noise;
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial)
    {
        RelayConfig cfg;
        cfg.n_antennas = 1 + trial % 20;
        cfg.relay_power = 1e-4 * (1 + trial % 7);
        const ChannelPair ch = relay_channels(cfg.n_antennas, trial);
        const CMat q = test::random_covariance(8, 0.1, rng);
        const CMat w = relay_precoder(ch.h1, ch.h2, q, cfg, noise);
        const double p = relay_output_power(ch.h1, w, q, noise.active_noise(), cfg.sigma_si2);
        CHECK(std::abs(p / cfg.relay_power - 1.0) < 1e-9);
    }
}

TEST_CASE("relay rate examples")
{
    NoiseModel noise = unit_noise();
    noise.sigma_r2 = 1.0;
    CMat one(1, 1);
    one << 1.0;
    CHECK(relay_rate(one, one, one, one, noise, 0.0) == doctest::Approx(std::log2(1.5)).epsilon(1e-14));
    CHECK(relay_rate(one, one, one, one, noise, 0.0) == doctest::Approx(0.585).epsilon(1e-3));
    CHECK(relay_rate(one, one, CMat::Zero(1, 1), one, noise, 0.0) == 0.0);

    NoiseModel quiet;
    quiet.sigma_r2 = 0.0;
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat h1 = test::random_cmat(4, 8, rng, 3e-4);
        const CMat h2 = test::random_cmat(2, 4, rng, 3e-3);
        const CMat w = test::random_cmat(4, 4, rng, 30.0);
        const CMat q = test::random_covariance(8, 0.1, rng);
        const CMat c = CMat::Identity(2, 2) * quiet.receiver_noise();
        CHECK(relay_rate(h1, h2, w, q, quiet, 0.0) == doctest::Approx(test::direct_rate(h2 * w * h1, q, c)).epsilon(1e-9));
    }
}

TEST_CASE("relay rate matches a direct colored-noise evaluation")
{
    const NoiseModel noise;
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat h1 = test::random_cmat(3, 8, rng, 3e-4);
        const CMat h2 = test::random_cmat(2, 3, rng, 3e-3);
        const CMat w = test::random_cmat(3, 3, rng, 30.0);
        const CMat q = test::random_covariance(8, 0.1, rng);
        const double si = 1e-9;
        const CMat r = h1 * q * h1.adjoint();
        const double a = (w * w.adjoint()).trace().real();
        const double drive = (w * r * w.adjoint()).trace().real() + noise.active_noise() * a;
        double p = 0.0;
        for (int i = 0; i < 10000; ++i)
            p = drive + si * a * p;
        const CMat c = CMat::Identity(2, 2) * noise.receiver_noise() +
                       (noise.active_noise() + si * p) * h2 * w * w.adjoint() * h2.adjoint();
        CHECK(relay_rate(h1, h2, w, q, noise, si) == doctest::Approx(test::direct_rate(h2 * w * h1, q, c)).epsilon(1e-9));
    }
}

TEST_CASE("rotation of the relay antennas")
{
    const NoiseModel noise;
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat h1 = test::random_cmat(4, 8, rng, 3e-4);
        const CMat h2 = test::random_cmat(2, 4, rng, 3e-3);
        const CMat w = test::random_cmat(4, 4, rng, 30.0);
        const CMat q = test::random_covariance(8, 0.1, rng);
        const CMat u = Eigen::HouseholderQR<CMat>(test::random_cmat(4, 4, rng)).householderQ();
        const double base = relay_rate(h1, h2, w, q, noise, 3e-10);
        const double rotated = relay_rate(u * h1, h2 * u.adjoint(), u * w * u.adjoint(), q, noise, 3e-10);
        CHECK(rotated == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("noiseless relay gain rises to a plateau")
{
    NoiseModel noise;
    noise.sigma_r2 = 0.0;
    Rng rng(6);
    const CMat h1 = test::random_cmat(3, 8, rng, 3e-4);
    const CMat h2 = test::random_cmat(2, 3, rng, 3e-3);
    const CMat w = test::random_cmat(3, 3, rng);
    const CMat q = test::random_covariance(8, 0.1, rng);
    double prev = 0.0;
    std::vector<double> rates;
    for (double g = 1.0; g < 1e8; g *= 10.0)
    {
        const double r = relay_rate(h1, h2, w * g, q, noise, 0.0);
        CHECK(r >= prev);
        prev = r;
        rates.push_back(r);
    }
    CHECK(rates.back() > rates.front());
}

TEST_CASE("relay experiment")
{
    const NoiseModel noise;
    const PowerModel pm;
    double sum1 = 0.0, sum2 = 0.0;
    for (int trial = 0; trial < 30; ++trial)
    {
        AOConfig ao;
        RelayConfig c1;
        c1.n_antennas = 1;
        RelayConfig c2;
        c2.n_antennas = 2;
        const RelayResult r1 = relay_experiment(relay_channels(1, trial), c1, noise, pm, ao);
        const RelayResult r2 = relay_experiment(relay_channels(2, trial), c2, noise, pm, ao);
        sum1 += r1.rate.se;
        sum2 += r2.rate.se;
        CHECK(test::non_decreasing(r2.trace, 1e-9));
        CHECK(r2.rate.total_power == doctest::Approx(0.2 + 1.0 + 0.1 + 2 * 0.1 + 1e-3 / 0.5).epsilon(1e-14));
        CHECK(r2.rate.ee == doctest::Approx(noise.bandwidth_hz * r2.rate.se / r2.rate.total_power));
        CHECK(r2.q.trace().real() == doctest::Approx(pm.bs_tx_power).epsilon(1e-12));
        CHECK(relay_output_power(relay_channels(2, trial).h1, r2.w, r2.q, noise.active_noise(), c2.sigma_si2) ==
              doctest::Approx(c2.relay_power).epsilon(1e-9));
    }
    CHECK(sum2 >= sum1);
    RelayConfig wrong;
    wrong.n_antennas = 3;
    CHECK_THROWS_AS(relay_experiment(relay_channels(2, 0), wrong, noise, pm, AOConfig{}), std::invalid_argument);
}

TEST_CASE("relay configuration")
{
    RelayConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_antennas = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    RelayConfig si;
    si.sigma_si2 = 1.0;
    CHECK_THROWS_AS(si.validate(), std::invalid_argument);
    CMat w = CMat::Identity(2, 2) * 10.0;
    CHECK_THROWS_AS(relay_output_power(CMat::Identity(2, 2), w, CMat::Identity(2, 2), 1.0, 0.01), UnstableLoopError);
}

}
