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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hrris
{

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Random stream used everywhere a channel or a random initial point is drawn.
using Rng = std::mt19937_64;

/// Derive the seed of an independent child stream from a master seed and a stream index.
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index);

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

/// Node positions in a 2D Cartesian frame (meters).
struct Geometry
{
    Point2 bs{0.0, 0.0};
    Point2 ms{100.0, 0.0};
    Point2 surface{95.0, 1.0};

    void validate() const; // throws std::invalid_argument
};

/// Log-distance law PL(d) = ref_loss_db - 10 * exponent * log10(d / ref_distance).
struct PathLossModel
{
    double ref_loss_db = -30.0;
    double ref_distance = 1.0; // m
    double exponent_hop1 = 2.0; // BS -> surface
    double exponent_hop2 = 2.8; // surface -> MS

    void validate() const;
};

enum class Hop1Kind
{
    pure_los,
    rician
};

struct FadingSpec
{
    Hop1Kind hop1_kind = Hop1Kind::rician;
    double rician_k_db = 10.0;
    int bs_antennas = 8;      // Nt
    int ms_antennas = 2;      // Nr
    int surface_elements = 100; // N
    double spacing_wavelengths = 0.5;

    // Array axis orientation (rad), measured from the global y axis. Broadside of an
    // array with orientation 0 points along +x.
    double bs_orientation = 0.0;
    double surface_orientation = 0.0;

    void validate() const;
};

/// Two hop matrices with path loss embedded.
///   h1: N x Nt   (BS -> surface)
///   h2: Nr x N   (surface -> MS)
struct ChannelPair
{
    CMat h1;
    CMat h2;

    int n_elements() const { return static_cast<int>(h1.rows()); }
    int n_tx() const { return static_cast<int>(h1.cols()); }
    int n_rx() const { return static_cast<int>(h2.rows()); }

    /// Keep the contiguous element range [first, first + count).
    ChannelPair elements(int first, int count) const;
};

double distance(const Point2 &a, const Point2 &b);

/// Path loss in dB (a negative number for attenuation). Throws std::domain_error for
/// d < ref_distance.
double path_loss_db(double d, double exponent, const PathLossModel &model);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Uniform linear array response with unit-modulus entries,
/// a_m = exp(j 2 pi spacing m sin(angle)), angle measured from broadside.
CVec ula_response(int n, double spacing_wavelengths, double angle);

/// Standard circular complex Gaussian matrix, E|g|^2 = 1.
CMat complex_gaussian(int rows, int cols, Rng &rng);

/// BS -> surface channel (N x Nt): LoS outer product plus optional Rician scatter.
CMat gen_hop1(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng);

/// Surface -> MS channel (Nr x N): i.i.d. Rayleigh.
CMat gen_hop2(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng);

/// Draw hop 1 then hop 2 from the same stream.
ChannelPair gen_channels(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng);

} // namespace hrris
