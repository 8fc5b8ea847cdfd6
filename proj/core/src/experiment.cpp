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

#include "hrris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace hrris
{

namespace
{

constexpr std::pair<Scheme, std::string_view> scheme_names[] = {
    {Scheme::ris_n, "ris-n"},
    {Scheme::ris_n_minus_k, "ris-n-minus-k"},
    {Scheme::hrris_fixed, "hrris-fixed"},
    {Scheme::hrris_dynamic, "hrris-dynamic"},
    {Scheme::relay, "relay"},
};

void add_flag(std::string &flags, std::string_view f)
{
    if (!flags.empty())
        flags += ';';
    flags += f;
}

struct Outcome
{
    double se = 0.0;
    double total_power = 0.0;
    int n = 0;
    int iterations = 0;
    bool converged = false;
    std::string flags;
};

// Per-trial state shared by all (scheme, k) rows of one channel realization.
class TrialContext
{
  public:
    TrialContext(const ExperimentSpec &spec, int trial)
        : spec_(spec), seed_(trial_seed(spec, trial)), channels_(trial_channels(spec, trial))
    {
        ao_ = spec.ao;
        ao_.seed = seed_;
    }

    std::uint64_t seed() const { return seed_; }

    TrialResult run(Scheme scheme, int k, int trial)
    {
        TrialResult row;
        row.scheme = scheme;
        row.k = k;
        row.trial = trial;
        row.seed = seed_;

        PowerModel pm = spec_.power;
        bool floored = false;
        try
        {
            if (spec_.equal_power_mode)
            {
                const auto ref = equal_power_reference(spec_);
                const bool hrris = scheme == Scheme::hrris_fixed || scheme == Scheme::hrris_dynamic;
                if (ref && !hrris)
                {
                    const double ref_total = outcome(*ref, k, spec_.power).total_power;
                    const PowerAdjustment adj =
                        apply_equal_power_mode(spec_, ref_total, nominal_total(scheme, k, spec_.power));
                    pm.bs_tx_power = adj.bs_power;
                    floored = adj.floored;
                }
                else if (!ref)
                    add_flag(row.flags, "no-reference");
            }
            const Outcome o = outcome(scheme, k, pm);
            row.se = o.se;
            row.n = o.n;
            row.total_power = o.total_power;
            row.iterations = o.iterations;
            row.converged = o.converged;
            row.ee = energy_efficiency(o.se, spec_.noise.bandwidth_hz, o.total_power);
            if (!o.flags.empty())
                add_flag(row.flags, o.flags);
        }
        catch (const UnstableLoopError &)
        {
            row.failed = true;
            add_flag(row.flags, "failed:unstable-loop");
        }
        catch (const std::exception &)
        {
            row.failed = true;
            add_flag(row.flags, "failed:error");
        }
        if (floored)
            add_flag(row.flags, "floor");
        row.bs_power = pm.bs_tx_power;
        if (row.failed)
        {
            row.se = row.ee = row.total_power = std::nan("");
            row.converged = false;
        }
        return row;
    }

  private:
    const OptResult &passive(const PowerModel &pm)
    {
        auto it = passive_.find(pm.bs_tx_power);
        if (it == passive_.end())
            it = passive_.emplace(pm.bs_tx_power, optimize_passive(channels_, surface(0), spec_.noise, pm, ao_)).first;
        return it->second;
    }

    const OptResult &unrestricted(const PowerModel &pm)
    {
        auto it = unrestricted_.find(pm.bs_tx_power);
        if (it == unrestricted_.end())
        {
            const OptResult &warm = passive(pm);
            const OptState start{warm.profile, warm.q, warm.se};
            SurfaceConfig cfg = surface(spec_.surface.n_elements);
            cfg.architecture = Architecture::dynamic;
            it = unrestricted_.emplace(pm.bs_tx_power,
                                       dynamic_unrestricted(channels_, cfg, spec_.noise, pm, ao_, &start))
                     .first;
        }
        return it->second;
    }

    SurfaceConfig surface(int k) const
    {
        SurfaceConfig cfg = spec_.surface;
        cfg.n_active_chains = k;
        if (static_cast<int>(cfg.active_indices.size()) != k)
            cfg.active_indices.clear();
        return cfg;
    }

    double nominal_total(Scheme scheme, int k, const PowerModel &pm) const
    {
        const int n = spec_.surface.n_elements;
        switch (scheme)
        {
        case Scheme::ris_n:
            return total_power_consumption(HardwareKind::ris, n, 0, 0.0, pm);
        case Scheme::ris_n_minus_k:
            return total_power_consumption(HardwareKind::ris, std::max(n - k, 0), 0, 0.0, pm);
        case Scheme::relay:
            return total_power_consumption(HardwareKind::relay, 0, k, spec_.relay.relay_power, pm);
        default:
            throw std::logic_error("nominal_total: HR-RIS totals depend on the optimized profile");
        }
    }

    Outcome from_surface(const OptResult &r, int n_elements, const PowerModel &pm, HardwareKind kind) const
    {
        Outcome o;
        o.se = r.se;
        o.n = n_elements;
        o.iterations = r.iterations;
        o.converged = r.converged;
        const int n_active = static_cast<int>(r.profile.active_set.size());
        o.total_power = total_power_consumption(kind, n_elements - n_active, n_active, r.active_power, pm);
        return o;
    }

    Outcome outcome(Scheme scheme, int k, const PowerModel &pm)
    {
        const int n = spec_.surface.n_elements;
        if (!(pm.bs_tx_power > 0.0))
        {
            Outcome o;
            o.n = scheme == Scheme::relay ? k : (scheme == Scheme::ris_n_minus_k ? n - k : n);
            o.total_power = nominal_total(scheme, k, pm);
            o.converged = true;
            o.flags = "zero-bs-power";
            return o;
        }
        const bool no_active = k == 0 || !(spec_.surface.active_power_budget > 0.0);
        switch (scheme)
        {
        case Scheme::ris_n:
            return from_surface(passive(pm), n, pm, HardwareKind::ris);
        case Scheme::ris_n_minus_k: {
            if (n - k <= 0)
            {
                Outcome o;
                o.total_power = nominal_total(scheme, k, pm);
                o.converged = true;
                o.flags = "no-elements";
                return o;
            }
            SurfaceConfig cfg = spec_.surface;
            cfg.n_elements = n - k;
            cfg.n_active_chains = 0;
            cfg.active_indices.clear();
            const ChannelPair sub = channels_.elements(k, n - k);
            return from_surface(optimize_passive(sub, cfg, spec_.noise, pm, ao_), n - k, pm, HardwareKind::ris);
        }
        case Scheme::hrris_fixed: {
            if (no_active)
                return from_surface(passive(pm), n, pm, HardwareKind::hrris);
            SurfaceConfig cfg = surface(k);
            cfg.architecture = Architecture::fixed;
            const OptResult &warm = passive(pm);
            const OptState start{warm.profile, warm.q, warm.se};
            return from_surface(optimize_fixed_hrris(channels_, cfg, spec_.noise, pm, ao_, &start), n, pm,
                                HardwareKind::hrris);
        }
        case Scheme::hrris_dynamic: {
            if (no_active)
                return from_surface(passive(pm), n, pm, HardwareKind::hrris);
            SurfaceConfig cfg = surface(k);
            cfg.architecture = Architecture::dynamic;
            cfg.active_indices.clear();
            const OptResult &warm = passive(pm);
            const OptState start{warm.profile, warm.q, warm.se};
            return from_surface(dynamic_refine(unrestricted(pm), channels_, cfg, spec_.noise, pm, ao_, &start), n,
                                pm, HardwareKind::hrris);
        }
        case Scheme::relay: {
            if (k > n)
                throw std::invalid_argument("relay needs K <= N");
            if (k == 0)
            {
                Outcome o;
                o.total_power = nominal_total(scheme, k, pm);
                o.converged = true;
                o.flags = "no-elements";
                return o;
            }
            RelayConfig rc = spec_.relay;
            rc.n_antennas = k;
            const RelayResult r = relay_experiment(channels_.elements(0, k), rc, spec_.noise, pm, ao_);
            Outcome o;
            o.se = r.rate.se;
            o.n = k;
            o.iterations = r.rate.iterations;
            o.converged = r.rate.converged;
            o.total_power = r.rate.total_power;
            return o;
        }
        }
        throw std::logic_error("unknown scheme");
    }

    const ExperimentSpec &spec_;
    std::uint64_t seed_;
    ChannelPair channels_;
    AOConfig ao_;
    std::map<double, OptResult> passive_;
    std::map<double, OptResult> unrestricted_;
};

double sample_stderr(const std::vector<double> &v, double mean)
{
    if (v.size() < 2)
        return 0.0;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v)
{
    if (v.empty())
        return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double metric_of(const TrialResult &r, Metric m)
{
    switch (m)
    {
    case Metric::se:
        return r.se;
    case Metric::ee:
        return r.ee;
    case Metric::total_power:
        return r.total_power;
    }
    return 0.0;
}

} // namespace

std::string_view scheme_name(Scheme s)
{
    for (const auto &[id, name] : scheme_names)
        if (id == s)
            return name;
    throw std::invalid_argument("unknown scheme id");
}

Scheme parse_scheme(std::string_view name)
{
    for (const auto &[id, n] : scheme_names)
        if (n == name)
            return id;
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected ris-n, ris-n-minus-k, hrris-fixed, hrris-dynamic or relay)");
}

const std::vector<Scheme> &all_schemes()
{
    static const std::vector<Scheme> all = {Scheme::ris_n, Scheme::ris_n_minus_k, Scheme::hrris_fixed,
                                            Scheme::hrris_dynamic, Scheme::relay};
    return all;
}

void ExperimentSpec::validate() const
{
    geometry.validate();
    fading.validate();
    path_loss.validate();
    noise.validate();
    power.validate();
    surface.validate();
    relay.validate();
    ao.validate();
    if (surface.n_elements != fading.surface_elements)
        throw std::invalid_argument("ExperimentSpec: surface.n_elements must equal fading.surface_elements");
    if (noise.sigma_si2_relay != relay.sigma_si2)
        throw std::invalid_argument("ExperimentSpec: noise.sigma_si2_relay must equal relay.sigma_si2");
    if (trials < 1)
        throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    if (schemes.empty())
        throw std::invalid_argument("ExperimentSpec: at least one scheme is required");
    if (k_values.empty())
        throw std::invalid_argument("ExperimentSpec: at least one K value is required");
    for (int k : k_values)
        if (k < 0 || k > surface.n_elements)
            throw std::invalid_argument("ExperimentSpec: K = " + std::to_string(k) + " outside [0, N]");
}

PowerAdjustment apply_equal_power_mode(const ExperimentSpec &spec, double reference_total, double scheme_total)
{
    PowerAdjustment adj;
    adj.bs_power = spec.power.bs_tx_power + spec.power.pa_efficiency * (reference_total - scheme_total);
    if (adj.bs_power < 0.0)
    {
        adj.bs_power = 0.0;
        adj.floored = true;
    }
    return adj;
}

std::optional<Scheme> equal_power_reference(const ExperimentSpec &spec)
{
    for (Scheme s : {Scheme::hrris_dynamic, Scheme::hrris_fixed})
        if (std::find(spec.schemes.begin(), spec.schemes.end(), s) != spec.schemes.end())
            return s;
    return std::nullopt;
}

std::uint64_t trial_seed(const ExperimentSpec &spec, int trial_index)
{
    return child_seed(spec.master_seed, static_cast<std::uint64_t>(trial_index));
}

ChannelPair trial_channels(const ExperimentSpec &spec, int trial_index)
{
    Rng rng(trial_seed(spec, trial_index));
    return gen_channels(spec.fading, spec.geometry, spec.path_loss, rng);
}

TrialResult run_trial(const ExperimentSpec &spec, Scheme scheme, int k, int trial_index)
{
    spec.validate();
    TrialContext ctx(spec, trial_index);
    return ctx.run(scheme, k, trial_index);
}

std::vector<Aggregate> aggregate(const std::vector<TrialResult> &rows, bool medians)
{
    std::map<std::pair<int, int>, std::vector<const TrialResult *>> groups;
    for (const auto &r : rows)
        groups[{static_cast<int>(r.scheme), r.k}].push_back(&r);

    std::vector<Aggregate> out;
    for (const auto &[key, members] : groups)
    {
        Aggregate a;
        a.scheme = static_cast<Scheme>(key.first);
        a.k = key.second;
        a.n = members.front()->n;
        std::vector<double> se, ee, pt;
        for (const TrialResult *r : members)
        {
            if (r->failed)
            {
                ++a.failed;
                continue;
            }
            se.push_back(r->se);
            ee.push_back(r->ee);
            pt.push_back(r->total_power);
        }
        a.count = static_cast<int>(se.size());
        if (a.count > 0)
        {
            a.se_mean = std::accumulate(se.begin(), se.end(), 0.0) / a.count;
            a.ee_mean = std::accumulate(ee.begin(), ee.end(), 0.0) / a.count;
            a.p_total_mean = std::accumulate(pt.begin(), pt.end(), 0.0) / a.count;
            a.se_stderr = sample_stderr(se, a.se_mean);
            a.ee_stderr = sample_stderr(ee, a.ee_mean);
        }
        else
        {
            a.se_mean = a.ee_mean = a.p_total_mean = std::nan("");
        }
        if (medians)
        {
            a.se_median = median_of(se);
            a.ee_median = median_of(ee);
        }
        out.push_back(a);
    }
    return out;
}

SweepResult run_sweep(const ExperimentSpec &spec, int threads)
{
    spec.validate();
    std::vector<Scheme> schemes = spec.schemes;
    std::sort(schemes.begin(), schemes.end());
    schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
    std::vector<int> ks = spec.k_values;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(spec.trials));
    auto work = [&](int t) {
        TrialContext ctx(spec, t);
        auto &rows = per_trial[static_cast<std::size_t>(t)];
        for (Scheme s : schemes)
            for (int k : ks)
                rows.push_back(ctx.run(s, k, t));
    };

    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, spec.trials);
    if (threads <= 1)
    {
        for (int t = 0; t < spec.trials; ++t)
            work(t);
    }
    else
    {
        std::atomic<int> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int t = next++; t < spec.trials; t = next++)
                    work(t);
            });
    }

    SweepResult out;
    for (auto &rows : per_trial)
        for (auto &r : rows)
            out.rows.push_back(std::move(r));
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const TrialResult &a, const TrialResult &b) {
        if (a.scheme != b.scheme)
            return a.scheme < b.scheme;
        if (a.k != b.k)
            return a.k < b.k;
        return a.trial < b.trial;
    });
    out.aggregates = aggregate(out.rows, spec.aggregate_medians);
    return out;
}

PairedStats paired_difference(const std::vector<TrialResult> &rows, Scheme a, Scheme b, int k, Metric metric)
{
    std::map<int, double> va, vb;
    for (const auto &r : rows)
    {
        if (r.k != k || r.failed)
            continue;
        if (r.scheme == a)
            va[r.trial] = metric_of(r, metric);
        if (r.scheme == b)
            vb[r.trial] = metric_of(r, metric);
    }
    std::vector<double> d;
    for (const auto &[t, x] : va)
        if (auto it = vb.find(t); it != vb.end())
            d.push_back(x - it->second);
    PairedStats ps;
    ps.count = static_cast<int>(d.size());
    if (d.empty())
        return ps;
    ps.mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    ps.stderr_ = sample_stderr(d, ps.mean);
    return ps;
}

double mean_metric(const std::vector<TrialResult> &rows, Scheme s, int k, Metric metric)
{
    double sum = 0.0;
    int count = 0;
    for (const auto &r : rows)
        if (r.scheme == s && r.k == k && !r.failed)
        {
            sum += metric_of(r, metric);
            ++count;
        }
    return count ? sum / count : std::nan("");
}

OracleReport run_oracle_suite(const ExperimentSpec &spec, int n, int b, int instances, int restarts)
{
    if (n < 1 || b < 1 || instances < 1 || restarts < 0)
        throw std::invalid_argument("run_oracle_suite: need n, b, instances >= 1 and restarts >= 0");
    const auto start = std::chrono::steady_clock::now();
    ExperimentSpec small = spec;
    small.fading.surface_elements = n;
    small.surface.n_elements = n;
    small.surface.n_active_chains = 0;
    small.surface.active_indices.clear();
    small.surface.phase_bits = b;
    small.ao.restarts = restarts;
    small.k_values = {0};
    small.validate();

    OracleReport rep;
    rep.instances = instances;
    std::vector<double> gaps;
    for (int i = 0; i < instances; ++i)
    {
        const ChannelPair ch = trial_channels(small, i);
        AOConfig ao = small.ao;
        ao.seed = trial_seed(small, i);
        const OptResult r = optimize_passive(ch, small.surface, small.noise, small.power, ao);
        const OptResult o = brute_force_oracle(ch, small.surface, small.noise, small.power);
        const double scale = std::max(o.se, 1e-300);
        const double gap = (o.se - r.se) / scale;
        if (gap < -1e-9)
            ++rep.exceeded;
        if (std::abs(gap) <= 1e-9)
            ++rep.matches;
        gaps.push_back(std::max(gap, 0.0));
    }
    rep.median_gap = median_of(gaps);
    rep.max_gap = *std::max_element(gaps.begin(), gaps.end());
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string version_string()
{
#ifdef HRRIS_VERSION
    return std::string("hrris ") + HRRIS_VERSION + " (C++" + std::to_string(__cplusplus / 100 % 100) + ", Eigen " +
           std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION) + ")";
#else
    return "hrris (unversioned)";
#endif
}

} // namespace hrris
