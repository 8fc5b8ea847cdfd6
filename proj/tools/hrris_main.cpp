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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrris/experiment.hpp"

namespace
{

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

int to_int(const std::string &s)
{
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

// "1,4,10" or the inclusive range "1:20".
std::vector<int> parse_k_list(const std::string &text)
{
    std::vector<int> ks;
    for (const auto &part : split(text, ','))
    {
        if (const auto colon = part.find(':'); colon != std::string::npos)
        {
            const int a = to_int(part.substr(0, colon));
            const int b = to_int(part.substr(colon + 1));
            if (b < a)
                throw std::invalid_argument("empty K range '" + part + "'");
            for (int k = a; k <= b; ++k)
                ks.push_back(k);
        }
        else
            ks.push_back(to_int(part));
    }
    if (ks.empty())
        throw std::invalid_argument("empty K list");
    return ks;
}

void print_aggregates(const std::vector<hrris::Aggregate> &aggs)
{
    std::printf("%-14s %4s %4s %6s %12s %10s %14s %12s\n", "scheme", "n", "k", "count", "se_mean", "se_stderr",
                "ee_mean", "p_total_mean");
    for (const auto &a : aggs)
        std::printf("%-14s %4d %4d %6d %12.5f %10.5f %14.6g %12.6f\n", std::string(hrris::scheme_name(a.scheme)).c_str(),
                    a.n, a.k, a.count, a.se_mean, a.se_stderr, a.ee_mean, a.p_total_mean);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for hybrid relay-reflecting intelligent surfaces"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", hrris::version_string());

    std::string config_path, schemes_text, k_text, out_path = "results.csv", dump_path;
    int trials = 0, threads = 1;
    std::int64_t seed = -1;
    bool equal_power = false, medians = false, quiet = false;

    auto *run = app.add_subcommand("run", "Monte-Carlo sweep over schemes and K");
    run->add_option("--config", config_path, "JSON scenario file (defaults apply when omitted)")->check(CLI::ExistingFile);
    run->add_option("--schemes", schemes_text, "comma-separated subset of ris-n,ris-n-minus-k,hrris-fixed,hrris-dynamic,relay");
    run->add_option("--k", k_text, "K values: list '1,4,10' or inclusive range '1:20'");
    run->add_option("--trials", trials, "number of paired trials")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "master seed")->check(CLI::NonNegativeNumber);
    run->add_flag("--equal-power", equal_power, "equalize total power consumption across schemes");
    run->add_flag("--medians", medians, "add median columns to the aggregate file");
    run->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_path, "row CSV path; aggregates go to the sibling .agg.csv");
    run->add_option("--dump-config", dump_path, "write the effective configuration as JSON");
    run->add_flag("--quiet", quiet, "suppress the aggregate table");

    int oracle_n = 4, oracle_b = 2, oracle_instances = 100, oracle_restarts = 4;
    auto *oracle = app.add_subcommand("oracle", "coordinate ascent against exhaustive search on small surfaces");
    oracle->add_option("--n", oracle_n, "surface elements")->check(CLI::Range(1, 8));
    oracle->add_option("--b", oracle_b, "phase bits")->check(CLI::Range(1, 4));
    oracle->add_option("--instances", oracle_instances, "random channels")->check(CLI::PositiveNumber);
    oracle->add_option("--restarts", oracle_restarts, "random-phase restarts")->check(CLI::NonNegativeNumber);
    oracle->add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        hrris::ExperimentSpec spec;
        if (!config_path.empty())
            spec = hrris::load_spec(config_path);

        if (*run)
        {
            if (!schemes_text.empty())
            {
                spec.schemes.clear();
                for (const auto &name : split(schemes_text, ','))
                    spec.schemes.push_back(hrris::parse_scheme(name));
            }
            if (!k_text.empty())
                spec.k_values = parse_k_list(k_text);
            if (trials > 0)
                spec.trials = trials;
            if (seed >= 0)
                spec.master_seed = static_cast<std::uint64_t>(seed);
            if (equal_power)
                spec.equal_power_mode = true;
            if (medians)
                spec.aggregate_medians = true;
            spec.validate();
            if (!dump_path.empty())
            {
                std::ofstream(dump_path) << hrris::dump_spec(spec);
            }

            const hrris::SweepResult sweep = hrris::run_sweep(spec, threads);
            hrris::write_results(sweep, out_path);
            if (!quiet)
                print_aggregates(sweep.aggregates);
            std::printf("wrote %zu rows to %s and %s\n", sweep.rows.size(), out_path.c_str(),
                        hrris::aggregate_path(out_path).string().c_str());
            return 0;
        }
        if (*oracle)
        {
            const hrris::OracleReport rep =
                hrris::run_oracle_suite(spec, oracle_n, oracle_b, oracle_instances, oracle_restarts);
            std::printf("instances %d\nmatches %d\nexceeded %d\nmedian_gap %.6g\nmax_gap %.6g\nseconds %.2f\n",
                        rep.instances, rep.matches, rep.exceeded, rep.median_gap, rep.max_gap, rep.seconds);
            return rep.exceeded == 0 ? 0 : 1;
        }
        std::cout << app.help();
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "hrris: " << e.what() << "\n";
        return 2;
    }
}
