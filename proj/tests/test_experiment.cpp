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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrris/experiment.hpp"
#include "support.hpp"

using namespace hrris;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / "hrris_tests";
    fs::create_directories(dir);
    return dir / name;
}

ExperimentSpec quick_spec()
{
    ExperimentSpec spec = test::small_spec(12, 3);
    spec.k_values = {0, 1, 3};
    return spec;
}

bool same_row(const TrialResult &a, const TrialResult &b)
{
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.scheme == b.scheme && a.n == b.n && a.k == b.k && a.trial == b.trial && a.seed == b.seed &&
           same(a.se, b.se) && same(a.ee, b.ee) && same(a.total_power, b.total_power) &&
           a.iterations == b.iterations && a.converged == b.converged && a.flags == b.flags;
}

} // namespace

TEST_SUITE("experiment")
{

TEST_CASE("scheme names")
{
    for (Scheme s : all_schemes())
        CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK(scheme_name(Scheme::ris_n_minus_k) == "ris-n-minus-k");
    CHECK_THROWS_AS(parse_scheme("ris"), std::invalid_argument);
}

TEST_CASE("spec validation")
{
    ExperimentSpec spec;
    CHECK_NOTHROW(spec.validate());
    ExperimentSpec t = spec;
    t.trials = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    ExperimentSpec k = spec;
    k.k_values = {101};
    CHECK_THROWS_AS(k.validate(), std::invalid_argument);
    ExperimentSpec s = spec;
    s.schemes.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    ExperimentSpec n = spec;
    n.surface.n_elements = 50;
    CHECK_THROWS_AS(n.validate(), std::invalid_argument);
}

TEST_CASE("trials are deterministic and paired")
{
    const ExperimentSpec spec = quick_spec();
    for (Scheme s : all_schemes())
        CHECK(same_row(run_trial(spec, s, 1, 2), run_trial(spec, s, 1, 2)));

    ExperimentSpec other = spec;
    other.schemes = {Scheme::relay};
    other.k_values = {3};
    other.equal_power_mode = true;
    const ChannelPair a = trial_channels(spec, 1);
    const ChannelPair b = trial_channels(other, 1);
    CHECK(a.h1 == b.h1);
    CHECK(a.h2 == b.h2);
    CHECK(trial_seed(spec, 1) == run_trial(spec, Scheme::relay, 1, 1).seed);
    CHECK(trial_seed(spec, 1) != trial_seed(spec, 2));
}

TEST_CASE("fixed surface without chains is the passive RIS")
{
    ExperimentSpec spec = quick_spec();
    for (int t = 0; t < 3; ++t)
    {
        const TrialResult ris = run_trial(spec, Scheme::ris_n, 0, t);
        const TrialResult fixed = run_trial(spec, Scheme::hrris_fixed, 0, t);
        CHECK(fixed.se == ris.se);
        CHECK(fixed.total_power == ris.total_power);
        CHECK(fixed.ee == ris.ee);
    }
    spec.surface.active_power_budget = 0.0;
    const TrialResult ris = run_trial(spec, Scheme::ris_n, 3, 0);
    const TrialResult fixed = run_trial(spec, Scheme::hrris_fixed, 3, 0);
    CHECK(fixed.se == ris.se);
}

TEST_CASE("per-trial dominance of the warm-started fixed surface")
{
    const ExperimentSpec spec = quick_spec();
    for (int t = 0; t < 3; ++t)
        for (int k : {1, 3})
            CHECK(run_trial(spec, Scheme::hrris_fixed, k, t).se >= run_trial(spec, Scheme::ris_n, k, t).se);
}

TEST_CASE("element counts per scheme")
{
    const ExperimentSpec spec = quick_spec();
    CHECK(run_trial(spec, Scheme::ris_n, 3, 0).n == 12);
    CHECK(run_trial(spec, Scheme::ris_n_minus_k, 3, 0).n == 9);
    CHECK(run_trial(spec, Scheme::hrris_dynamic, 3, 0).n == 12);
    CHECK(run_trial(spec, Scheme::relay, 3, 0).n == 3);
    const TrialResult none = run_trial(spec, Scheme::relay, 0, 0);
    CHECK(none.se == 0.0);
    CHECK(none.flags == "no-elements");
    CHECK_FALSE(none.failed);
}

TEST_CASE("equal power adjustment")
{
    const ExperimentSpec spec;
    const PowerAdjustment none = apply_equal_power_mode(spec, 1.8, 1.8);
    CHECK(none.bs_power == spec.power.bs_tx_power);
    CHECK_FALSE(none.floored);

    const double hr = total_power_consumption(HardwareKind::hrris, 96, 4, 1e-3, spec.power);
    const double ris = total_power_consumption(HardwareKind::ris, 100, 0, 0.0, spec.power);
    const PowerAdjustment up = apply_equal_power_mode(spec, hr, ris);
    CHECK(up.bs_power == doctest::Approx(0.1 + 0.5 * 0.062).epsilon(1e-12));
    PowerModel adjusted = spec.power;
    adjusted.bs_tx_power = up.bs_power;
    CHECK(std::abs(total_power_consumption(HardwareKind::ris, 100, 0, 0.0, adjusted) - hr) < 1e-12);

    const double relay20 = total_power_consumption(HardwareKind::relay, 0, 20, 1e-3, spec.power);
    const double hr20 = total_power_consumption(HardwareKind::hrris, 80, 20, 1e-3, spec.power);
    const PowerAdjustment floor = apply_equal_power_mode(spec, hr20, relay20);
    CHECK(floor.floored);
    CHECK(floor.bs_power == 0.0);

    ExperimentSpec both = spec;
    CHECK(equal_power_reference(both) == Scheme::hrris_dynamic);
    both.schemes = {Scheme::ris_n, Scheme::hrris_fixed};
    CHECK(equal_power_reference(both) == Scheme::hrris_fixed);
    both.schemes = {Scheme::ris_n};
    CHECK_FALSE(equal_power_reference(both).has_value());
}

TEST_CASE("equal power sweep equalizes totals")
{
    ExperimentSpec spec = quick_spec();
    spec.equal_power_mode = true;
    spec.k_values = {0, 1, 3, 12};
    const SweepResult sweep = run_sweep(spec);
    for (int k : spec.k_values)
        for (int t = 0; t < spec.trials; ++t)
        {
            const TrialResult *ref = nullptr;
            for (const auto &r : sweep.rows)
                if (r.k == k && r.trial == t && r.scheme == Scheme::hrris_dynamic)
                    ref = &r;
            REQUIRE(ref != nullptr);
            for (const auto &r : sweep.rows)
            {
                if (r.k != k || r.trial != t || r.scheme == Scheme::hrris_fixed)
                    continue;
                if (r.flags.find("floor") != std::string::npos)
                {
                    CHECK(r.scheme == Scheme::relay);
                    continue;
                }
                CHECK(std::abs(r.total_power - ref->total_power) < 1e-9);
            }
        }
    ExperimentSpec zero = quick_spec();
    zero.equal_power_mode = true;
    for (Scheme s : {Scheme::ris_n, Scheme::ris_n_minus_k})
        CHECK(run_trial(zero, s, 0, 0).se == run_trial(quick_spec(), s, 0, 0).se);

    bool floored = false;
    for (const auto &r : sweep.rows)
        if (r.scheme == Scheme::relay && r.k == 12)
            floored = floored || r.flags.find("floor") != std::string::npos;
    CHECK(floored);
}

TEST_CASE("sweep shape and ordering")
{
    ExperimentSpec spec = test::small_spec(8, 10);
    spec.schemes = {Scheme::relay, Scheme::ris_n};
    spec.k_values = {4, 1, 2};
    const SweepResult sweep = run_sweep(spec);
    CHECK(sweep.rows.size() == 60);
    CHECK(sweep.aggregates.size() == 6);
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    {
        const auto &a = sweep.rows[i - 1];
        const auto &b = sweep.rows[i];
        CHECK(std::tie(a.scheme, a.k, a.trial) < std::tie(b.scheme, b.k, b.trial));
    }
    for (const auto &agg : sweep.aggregates)
        CHECK(agg.count == 10);

    const SweepResult threaded = run_sweep(spec, 3);
    REQUIRE(threaded.rows.size() == sweep.rows.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i)
        CHECK(same_row(threaded.rows[i], sweep.rows[i]));
}

TEST_CASE("aggregation and paired statistics")
{
    std::vector<TrialResult> rows;
    for (int t = 0; t < 4; ++t)
    {
        TrialResult a;
        a.scheme = Scheme::hrris_fixed;
        a.k = 2;
        a.n = 10;
        a.trial = t;
        a.se = 10.0 + t;
        a.ee = 2.0 * t;
        a.total_power = 1.0;
        rows.push_back(a);
        TrialResult b = a;
        b.scheme = Scheme::ris_n;
        b.se = 9.0 + t + (t == 3 ? 1.0 : 0.0);
        rows.push_back(b);
    }
    TrialResult bad = rows.front();
    bad.trial = 4;
    bad.failed = true;
    bad.se = bad.ee = bad.total_power = std::nan("");
    rows.push_back(bad);

    const auto aggs = aggregate(rows, true);
    REQUIRE(aggs.size() == 2);
    const Aggregate &fixed = aggs[0].scheme == Scheme::hrris_fixed ? aggs[0] : aggs[1];
    CHECK(fixed.count == 4);
    CHECK(fixed.failed == 1);
    CHECK(fixed.se_mean == doctest::Approx(11.5));
    CHECK(fixed.se_stderr == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(fixed.se_median.value() == doctest::Approx(11.5));
    CHECK(fixed.p_total_mean == 1.0);

    const PairedStats d = paired_difference(rows, Scheme::hrris_fixed, Scheme::ris_n, 2, Metric::se);
    CHECK(d.count == 4);
    CHECK(d.mean == doctest::Approx(0.75));
    CHECK(d.stderr_ == doctest::Approx(std::sqrt(0.25 / 4.0)));
    CHECK(mean_metric(rows, Scheme::ris_n, 2, Metric::se) == doctest::Approx(10.75));
    CHECK(std::isnan(mean_metric(rows, Scheme::relay, 2, Metric::se)));
}

TEST_CASE("csv files")
{
    const fs::path empty = scratch("empty.csv");
    write_results(std::vector<TrialResult>{}, empty);
    CHECK(slurp(empty) == std::string(csv_header) + "\n");
    CHECK(read_results(empty).empty());
    CHECK(aggregate_path("out/run.csv") == fs::path("out/run.agg.csv"));

    ExperimentSpec spec = quick_spec();
    spec.schemes = {Scheme::hrris_dynamic, Scheme::ris_n};
    spec.aggregate_medians = true;
    const SweepResult sweep = run_sweep(spec);
    const fs::path out = scratch("sweep.csv");
    write_results(sweep, out);
    const std::string text = slurp(out);
    CHECK(text.substr(0, text.find('\n')) == csv_header);
    CHECK(fs::exists(aggregate_path(out)));
    const std::string agg = slurp(aggregate_path(out));
    CHECK(agg.substr(0, agg.find('\n')) ==
          "scheme,n,k,count,failed,se_mean,se_stderr,ee_mean,ee_stderr,p_total_mean,se_median,ee_median");

    const std::vector<TrialResult> back = read_results(out);
    REQUIRE(back.size() == sweep.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(same_row(back[i], sweep.rows[i]));

    const SweepResult again = run_sweep(spec);
    const fs::path out2 = scratch("sweep2.csv");
    write_results(again, out2);
    CHECK(slurp(out2) == text);
    CHECK(slurp(aggregate_path(out2)) == agg);

    ExperimentSpec one = spec;
    one.schemes = {Scheme::relay};
    const fs::path single = scratch("single.csv");
    write_results(run_sweep(one), single);
    const std::string s = slurp(single);
    CHECK(s.substr(0, s.find('\n')) == csv_header);

    try
    {
        write_results(std::vector<TrialResult>{}, "/nonexistent-dir/x.csv");
        FAIL("expected an I/O error");
    }
    catch (const std::exception &e)
    {
        CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
    }
}

TEST_CASE("failed rows keep their place")
{
    TrialResult r;
    r.scheme = Scheme::relay;
    r.k = 2;
    r.failed = true;
    r.se = r.ee = r.total_power = std::nan("");
    r.flags = "failed:unstable-loop";
    const fs::path p = scratch("failed.csv");
    write_results(std::vector<TrialResult>{r}, p);
    const auto back = read_results(p);
    REQUIRE(back.size() == 1);
    CHECK(std::isnan(back[0].se));
    CHECK(back[0].flags == "failed:unstable-loop");
}

TEST_CASE("json configuration")
{
    const ExperimentSpec defaults = parse_spec("{}");
    CHECK(dump_spec(defaults) == dump_spec(ExperimentSpec{}));

    ExperimentSpec custom = quick_spec();
    custom.schemes = {Scheme::relay, Scheme::hrris_fixed};
    custom.surface.architecture = Architecture::fixed;
    custom.surface.n_active_chains = 2;
    custom.surface.active_indices = {3, 7};
    custom.surface.budget_mode = BudgetMode::per_element;
    custom.noise.sigma_r2 = 2e-13;
    custom.fading.hop1_kind = Hop1Kind::pure_los;
    custom.ao.init = InitKind::random_phase;
    custom.master_seed = 123456789012345ULL;
    custom.equal_power_mode = true;
    const std::string text = dump_spec(custom);
    const ExperimentSpec back = parse_spec(text);
    CHECK(dump_spec(back) == text);
    CHECK(back.noise.sigma_r2.value() == 2e-13);
    CHECK(back.master_seed == 123456789012345ULL);
    CHECK(back.schemes == custom.schemes);

    const ExperimentSpec partial = parse_spec(R"({"trials": 7, "surface": {"phase_bits": 3}})");
    CHECK(partial.trials == 7);
    CHECK(partial.surface.phase_bits == 3);
    CHECK(partial.surface.n_elements == 100);

    CHECK(parse_spec(R"({"noise": {"sigma_si2_relay": 1e-9}})").relay.sigma_si2 == 1e-9);
    CHECK(parse_spec(R"({"relay": {"sigma_si2": 1e-9}})").noise.sigma_si2_relay == 1e-9);
    CHECK_THROWS_AS(parse_spec(R"({"noise": {"sigma_si2_relay": 1e-9}, "relay": {"sigma_si2": 1e-10}})"),
                    std::invalid_argument);

    CHECK_THROWS_AS(parse_spec(R"({"trails": 7})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec(R"({"surface": {"bits": 3}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec(R"({"surface": {"architecture": "hybrid"}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec(R"({"trials": "many"})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec(R"({"trials": 0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_spec(R"({"schemes": ["ris-n", "mirror"]})"), std::invalid_argument);

    const fs::path file = scratch("spec.json");
    std::ofstream(file) << text;
    CHECK(dump_spec(load_spec(file)) == text);
    try
    {
        load_spec(scratch("missing.json"));
        FAIL("expected an error");
    }
    catch (const std::exception &e)
    {
        CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
    }
}

TEST_CASE("oracle suite")
{
    const OracleReport rep = run_oracle_suite(ExperimentSpec{}, 3, 2, 10, 2);
    CHECK(rep.instances == 10);
    CHECK(rep.exceeded == 0);
    CHECK(rep.matches <= 10);
    CHECK(rep.median_gap >= 0.0);
    CHECK(version_string().find("hrris") == 0);
}

}
