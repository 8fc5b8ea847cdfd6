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
#include <stdexcept>
#include <vector>

#include "hrris/channel_model.hpp"
#include "hrris/models.hpp"

namespace hrris
{

/// Raised when an active element (or relay) would oscillate: alpha^2 * sigma_si^2 >= 1.
class UnstableLoopError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Architecture
{
    fixed,
    dynamic
};

/// How the active power budget P_a is shared.
enum class BudgetMode
{
    total,      // sum over active elements <= P_a
    per_element // each active element <= P_a
};

struct SurfaceConfig
{
    int n_elements = 100;     // N
    int n_active_chains = 4;  // K
    Architecture architecture = Architecture::dynamic;
    std::vector<int> active_indices; // fixed architecture only; empty means the first K
    int phase_bits = 2;
    double active_power_budget = 1e-3; // P_a, W (0 dBm)
    BudgetMode budget_mode = BudgetMode::total;

    void validate() const;

    /// Indices allowed to carry an RF-PA chain under the fixed architecture.
    std::vector<int> fixed_indices() const;
};

/// 2^b uniformly spaced phases starting at 0.
class PhaseCodebook
{
  public:
    explicit PhaseCodebook(int bits);

    int bits() const { return bits_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Nearest codebook phase in circular distance; ties go to the smaller value.
    double quantize(double theta) const;
    bool contains(double theta) const;

  private:
    int bits_;
    std::vector<double> values_;
};

/// Per-element coefficients alpha_n * exp(j theta_n). Elements outside the active set
/// reflect with unit amplitude.
struct CoeffProfile
{
    std::vector<double> amplitudes;
    std::vector<double> phases;
    std::vector<int> active_set; // sorted, distinct

    static CoeffProfile passive(int n, double phase = 0.0);

    int size() const { return static_cast<int>(amplitudes.size()); }
    bool is_active(int n) const;
    cdouble coefficient(int n) const;
    CVec coefficients() const;

    /// Throws std::invalid_argument on any broken invariant. `max_active` < 0 skips the
    /// cardinality check; a null codebook skips phase membership.
    void validate(const PhaseCodebook *book = nullptr, int max_active = -1) const;
};

/// Dense diagonal coefficient matrix. Validates the profile first.
CMat coeff_matrix(const CoeffProfile &p);

/// Output power of one active element closing the SI loop:
///   p = alpha^2 (s + sigma_r2) / (1 - alpha^2 sigma_si2).
double element_output_power(double alpha, double incident_power, double sigma_r2, double sigma_si2);

/// Largest amplitude whose loop output stays at or below `power`.
double amplitude_for_output_power(double power, double incident_power, double sigma_r2, double sigma_si2);

struct BudgetReport
{
    bool feasible = true;
    double total_active_power = 0.0;
    double max_element_power = 0.0;
};

BudgetReport budget_check(const CoeffProfile &p, std::span<const double> incident_powers, const NoiseModel &noise,
                          const SurfaceConfig &cfg);

/// Relative tolerance used by every budget comparison.
inline constexpr double budget_tolerance = 1e-12;

} // namespace hrris
