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

#include "hrris/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hrris
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

bool finite(const Point2 &p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool same(const Point2 &a, const Point2 &b) { return a.x == b.x && a.y == b.y; }

// Angle of the direction from -> to, measured from the broadside of an array whose axis
// is rotated by `orientation` from the y axis.
double departure_angle(const Point2 &from, const Point2 &to, double orientation)
{
    return std::atan2(to.y - from.y, to.x - from.x) - orientation;
}

} // namespace

std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return splitmix64(splitmix64(master_seed) ^ (index + 0x632BE59BD9B4E019ull));
}

void Geometry::validate() const
{
    if (!finite(bs) || !finite(ms) || !finite(surface))
        throw std::invalid_argument("Geometry: coordinates must be finite");
    if (same(bs, ms) || same(bs, surface) || same(ms, surface))
        throw std::invalid_argument("Geometry: BS, MS and surface positions must be pairwise distinct");
}

void PathLossModel::validate() const
{
    if (!(ref_distance > 0.0) || !std::isfinite(ref_distance))
        throw std::invalid_argument("PathLossModel: ref_distance must be > 0");
    if (!(exponent_hop1 >= 0.0) || !(exponent_hop2 >= 0.0))
        throw std::invalid_argument("PathLossModel: exponents must be >= 0");
    if (!std::isfinite(ref_loss_db))
        throw std::invalid_argument("PathLossModel: ref_loss_db must be finite");
}

void FadingSpec::validate() const
{
    if (bs_antennas < 1 || ms_antennas < 1 || surface_elements < 1)
        throw std::invalid_argument("FadingSpec: antenna and element counts must be >= 1");
    if (!std::isfinite(rician_k_db))
        throw std::invalid_argument("FadingSpec: Rician factor must be finite");
    if (!(spacing_wavelengths > 0.0))
        throw std::invalid_argument("FadingSpec: spacing must be > 0");
}

ChannelPair ChannelPair::elements(int first, int count) const
{
    if (first < 0 || count < 0 || first + count > n_elements())
        throw std::out_of_range("ChannelPair::elements: range [" + std::to_string(first) + ", " +
                                std::to_string(first + count) + ") outside " + std::to_string(n_elements()));
    return {h1.middleRows(first, count), h2.middleCols(first, count)};
}

double distance(const Point2 &a, const Point2 &b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss_db(double d, double exponent, const PathLossModel &model)
{
    if (!(d >= model.ref_distance))
        throw std::domain_error("path_loss_db: distance " + std::to_string(d) +
                                " m is below the reference distance (near field)");
    return model.ref_loss_db - 10.0 * exponent * std::log10(d / model.ref_distance);
}

CVec ula_response(int n, double spacing_wavelengths, double angle)
{
    CVec a(n);
    const double step = 2.0 * std::numbers::pi * spacing_wavelengths * std::sin(angle);
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(1.0, step * m);
    return a;
}

CMat complex_gaussian(int rows, int cols, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMat g(rows, cols);
    // Column-major fill so the draw order is fixed by the storage order.
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = cdouble(re, im);
        }
    return g;
}

CMat gen_hop1(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng)
{
    spec.validate();
    const double d = distance(geom.bs, geom.surface);
    const double gain = std::sqrt(db_to_linear(path_loss_db(d, pl.exponent_hop1, pl)));

    const CVec a_bs = ula_response(spec.bs_antennas, spec.spacing_wavelengths,
                                   departure_angle(geom.bs, geom.surface, spec.bs_orientation));
    const CVec a_surf = ula_response(spec.surface_elements, spec.spacing_wavelengths,
                                     departure_angle(geom.surface, geom.bs, spec.surface_orientation));
    const CMat los = a_surf * a_bs.adjoint();

    if (spec.hop1_kind == Hop1Kind::pure_los)
        return gain * los;

    const double kappa = db_to_linear(spec.rician_k_db);
    const CMat scatter = complex_gaussian(spec.surface_elements, spec.bs_antennas, rng);
    return gain * (std::sqrt(kappa / (1.0 + kappa)) * los + std::sqrt(1.0 / (1.0 + kappa)) * scatter);
}

CMat gen_hop2(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng)
{
    spec.validate();
    const double d = distance(geom.surface, geom.ms);
    const double gain = std::sqrt(db_to_linear(path_loss_db(d, pl.exponent_hop2, pl)));
    return gain * complex_gaussian(spec.ms_antennas, spec.surface_elements, rng);
}

ChannelPair gen_channels(const FadingSpec &spec, const Geometry &geom, const PathLossModel &pl, Rng &rng)
{
    geom.validate();
    pl.validate();
    ChannelPair ch;
    ch.h1 = gen_hop1(spec, geom, pl, rng);
    ch.h2 = gen_hop2(spec, geom, pl, rng);
    return ch;
}

} // namespace hrris
