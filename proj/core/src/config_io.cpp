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

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hrris/experiment.hpp"

namespace hrris
{

namespace
{

using nlohmann::json;

// Reads one JSON object, rejecting keys it was not asked about.
class Section
{
  public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw std::invalid_argument("config: '" + path_ + "' must be an object");
    }

    template <typename T> void get(const char *key, T &out)
    {
        seen_.insert(key);
        if (auto it = j_.find(key); it != j_.end())
        {
            try
            {
                out = it->template get<T>();
            }
            catch (const json::exception &e)
            {
                throw std::invalid_argument("config: '" + path_ + "." + key + "': " + e.what());
            }
        }
    }

    const json *child(const char *key)
    {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string path(const char *key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw std::invalid_argument("config: unknown key '" + (path_.empty() ? it.key() : path_ + "." + it.key()) +
                                            "'");
    }

  private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

Point2 to_point(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("config: '" + where + "' must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json from_point(const Point2 &p) { return json::array({p.x, p.y}); }

template <typename Fn> void with(Section &parent, const char *key, Fn fn)
{
    if (const json *c = parent.child(key))
    {
        Section s(*c, parent.path(key));
        fn(s);
        s.finish();
    }
}

} // namespace

ExperimentSpec parse_spec(std::string_view text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }

    ExperimentSpec spec;
    Section top(root, "");
    bool noise_si_relay = false;
    bool relay_si = false;

    with(top, "geometry", [&](Section &s) {
        for (auto [key, dst] : {std::pair{"bs", &spec.geometry.bs}, std::pair{"ms", &spec.geometry.ms},
                                std::pair{"surface", &spec.geometry.surface}})
            if (const json *p = s.child(key))
                *dst = to_point(*p, s.path(key));
    });
    with(top, "fading", [&](Section &s) {
        std::string kind = spec.fading.hop1_kind == Hop1Kind::rician ? "rician" : "pure-los";
        s.get("hop1_kind", kind);
        if (kind == "rician")
            spec.fading.hop1_kind = Hop1Kind::rician;
        else if (kind == "pure-los")
            spec.fading.hop1_kind = Hop1Kind::pure_los;
        else
            throw std::invalid_argument("config: fading.hop1_kind must be 'rician' or 'pure-los'");
        s.get("rician_k_db", spec.fading.rician_k_db);
        s.get("bs_antennas", spec.fading.bs_antennas);
        s.get("ms_antennas", spec.fading.ms_antennas);
        s.get("surface_elements", spec.fading.surface_elements);
        s.get("spacing_wavelengths", spec.fading.spacing_wavelengths);
        s.get("bs_orientation", spec.fading.bs_orientation);
        s.get("surface_orientation", spec.fading.surface_orientation);
    });
    with(top, "path_loss", [&](Section &s) {
        s.get("ref_loss_db", spec.path_loss.ref_loss_db);
        s.get("ref_distance", spec.path_loss.ref_distance);
        s.get("exponent_hop1", spec.path_loss.exponent_hop1);
        s.get("exponent_hop2", spec.path_loss.exponent_hop2);
    });
    with(top, "noise", [&](Section &s) {
        s.get("noise_psd_dbm_hz", spec.noise.noise_psd_dbm_hz);
        s.get("bandwidth_hz", spec.noise.bandwidth_hz);
        if (const json *v = s.child("sigma_r2"); v && !v->is_null())
            spec.noise.sigma_r2 = v->get<double>();
        s.get("sigma_si2_surface", spec.noise.sigma_si2_surface);
        noise_si_relay = s.child("sigma_si2_relay") != nullptr;
        s.get("sigma_si2_relay", spec.noise.sigma_si2_relay);
    });
    with(top, "power", [&](Section &s) {
        s.get("bs_tx_power", spec.power.bs_tx_power);
        s.get("pa_efficiency", spec.power.pa_efficiency);
        s.get("bs_circuit", spec.power.bs_circuit);
        s.get("ms_circuit", spec.power.ms_circuit);
        s.get("passive_element", spec.power.passive_element);
        s.get("active_element_circuit", spec.power.active_element_circuit);
        s.get("relay_element", spec.power.relay_element);
    });
    with(top, "surface", [&](Section &s) {
        s.get("n_elements", spec.surface.n_elements);
        s.get("n_active_chains", spec.surface.n_active_chains);
        std::string arch = spec.surface.architecture == Architecture::fixed ? "fixed" : "dynamic";
        s.get("architecture", arch);
        if (arch == "fixed")
            spec.surface.architecture = Architecture::fixed;
        else if (arch == "dynamic")
            spec.surface.architecture = Architecture::dynamic;
        else
            throw std::invalid_argument("config: surface.architecture must be 'fixed' or 'dynamic'");
        s.get("active_indices", spec.surface.active_indices);
        s.get("phase_bits", spec.surface.phase_bits);
        s.get("active_power_budget", spec.surface.active_power_budget);
        std::string mode = spec.surface.budget_mode == BudgetMode::total ? "total" : "per-element";
        s.get("budget_mode", mode);
        if (mode == "total")
            spec.surface.budget_mode = BudgetMode::total;
        else if (mode == "per-element")
            spec.surface.budget_mode = BudgetMode::per_element;
        else
            throw std::invalid_argument("config: surface.budget_mode must be 'total' or 'per-element'");
    });
    with(top, "relay", [&](Section &s) {
        s.get("n_antennas", spec.relay.n_antennas);
        s.get("relay_power", spec.relay.relay_power);
        relay_si = s.child("sigma_si2") != nullptr;
        s.get("sigma_si2", spec.relay.sigma_si2);
    });
    with(top, "ao", [&](Section &s) {
        s.get("max_outer_iters", spec.ao.max_outer_iters);
        s.get("rel_tolerance", spec.ao.rel_tolerance);
        s.get("amplitude_grid", spec.ao.amplitude_grid);
        s.get("golden_iters", spec.ao.golden_iters);
        s.get("restarts", spec.ao.restarts);
        std::string init = spec.ao.init == InitKind::all_zero_phase ? "all-zero-phase" : "random-phase";
        s.get("init", init);
        if (init == "all-zero-phase")
            spec.ao.init = InitKind::all_zero_phase;
        else if (init == "random-phase")
            spec.ao.init = InitKind::random_phase;
        else
            throw std::invalid_argument("config: ao.init must be 'all-zero-phase' or 'random-phase'");
        s.get("seed", spec.ao.seed);
    });

    if (const json *sc = top.child("schemes"))
    {
        spec.schemes.clear();
        for (const auto &name : sc->get<std::vector<std::string>>())
            spec.schemes.push_back(parse_scheme(name));
    }
    top.get("k_values", spec.k_values);
    top.get("trials", spec.trials);
    top.get("master_seed", spec.master_seed);
    top.get("equal_power_mode", spec.equal_power_mode);
    top.get("aggregate_medians", spec.aggregate_medians);
    top.finish();

    if (noise_si_relay && !relay_si)
        spec.relay.sigma_si2 = spec.noise.sigma_si2_relay;
    else if (relay_si && !noise_si_relay)
        spec.noise.sigma_si2_relay = spec.relay.sigma_si2;

    spec.validate();
    return spec;
}

std::string dump_spec(const ExperimentSpec &spec)
{
    json j;
    j["geometry"] = {{"bs", from_point(spec.geometry.bs)},
                     {"ms", from_point(spec.geometry.ms)},
                     {"surface", from_point(spec.geometry.surface)}};
    j["fading"] = {{"hop1_kind", spec.fading.hop1_kind == Hop1Kind::rician ? "rician" : "pure-los"},
                   {"rician_k_db", spec.fading.rician_k_db},
                   {"bs_antennas", spec.fading.bs_antennas},
                   {"ms_antennas", spec.fading.ms_antennas},
                   {"surface_elements", spec.fading.surface_elements},
                   {"spacing_wavelengths", spec.fading.spacing_wavelengths},
                   {"bs_orientation", spec.fading.bs_orientation},
                   {"surface_orientation", spec.fading.surface_orientation}};
    j["path_loss"] = {{"ref_loss_db", spec.path_loss.ref_loss_db},
                      {"ref_distance", spec.path_loss.ref_distance},
                      {"exponent_hop1", spec.path_loss.exponent_hop1},
                      {"exponent_hop2", spec.path_loss.exponent_hop2}};
    j["noise"] = {{"noise_psd_dbm_hz", spec.noise.noise_psd_dbm_hz},
                  {"bandwidth_hz", spec.noise.bandwidth_hz},
                  {"sigma_r2", spec.noise.sigma_r2 ? json(*spec.noise.sigma_r2) : json(nullptr)},
                  {"sigma_si2_surface", spec.noise.sigma_si2_surface},
                  {"sigma_si2_relay", spec.noise.sigma_si2_relay}};
    j["power"] = {{"bs_tx_power", spec.power.bs_tx_power},
                  {"pa_efficiency", spec.power.pa_efficiency},
                  {"bs_circuit", spec.power.bs_circuit},
                  {"ms_circuit", spec.power.ms_circuit},
                  {"passive_element", spec.power.passive_element},
                  {"active_element_circuit", spec.power.active_element_circuit},
                  {"relay_element", spec.power.relay_element}};
    j["surface"] = {{"n_elements", spec.surface.n_elements},
                    {"n_active_chains", spec.surface.n_active_chains},
                    {"architecture", spec.surface.architecture == Architecture::fixed ? "fixed" : "dynamic"},
                    {"active_indices", spec.surface.active_indices},
                    {"phase_bits", spec.surface.phase_bits},
                    {"active_power_budget", spec.surface.active_power_budget},
                    {"budget_mode", spec.surface.budget_mode == BudgetMode::total ? "total" : "per-element"}};
    j["relay"] = {{"n_antennas", spec.relay.n_antennas},
                  {"relay_power", spec.relay.relay_power},
                  {"sigma_si2", spec.relay.sigma_si2}};
    j["ao"] = {{"max_outer_iters", spec.ao.max_outer_iters},
               {"rel_tolerance", spec.ao.rel_tolerance},
               {"amplitude_grid", spec.ao.amplitude_grid},
               {"golden_iters", spec.ao.golden_iters},
               {"restarts", spec.ao.restarts},
               {"init", spec.ao.init == InitKind::all_zero_phase ? "all-zero-phase" : "random-phase"},
               {"seed", spec.ao.seed}};
    std::vector<std::string> names;
    for (Scheme s : spec.schemes)
        names.emplace_back(scheme_name(s));
    j["schemes"] = names;
    j["k_values"] = spec.k_values;
    j["trials"] = spec.trials;
    j["master_seed"] = spec.master_seed;
    j["equal_power_mode"] = spec.equal_power_mode;
    j["aggregate_medians"] = spec.aggregate_medians;
    return j.dump(2) + "\n";
}

ExperimentSpec load_spec(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try
    {
        return parse_spec(buf.str());
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

} // namespace hrris
