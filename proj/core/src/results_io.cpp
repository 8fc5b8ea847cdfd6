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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hrris/experiment.hpp"

namespace hrris
{

namespace
{

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> f;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep))
        f.push_back(cur);
    if (!line.empty() && line.back() == sep)
        f.emplace_back();
    return f;
}

double parse_double(const std::string &s, const std::filesystem::path &path, int line)
{
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

} // namespace

std::filesystem::path aggregate_path(const std::filesystem::path &rows_path)
{
    std::filesystem::path p = rows_path;
    if (p.extension() == ".csv")
        p.replace_extension();
    p += ".agg.csv";
    return p;
}

void write_results(const std::vector<TrialResult> &rows, const std::filesystem::path &path)
{
    std::ofstream out = open_out(path);
    out << csv_header << '\n';
    for (const auto &r : rows)
    {
        out << scheme_name(r.scheme) << ',' << r.n << ',' << r.k << ',' << r.trial << ',' << r.seed << ','
            << num(r.se) << ',' << num(r.ee) << ',' << num(r.total_power) << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << r.flags << '\n';
    }
    finish(out, path);
}

void write_aggregates(const std::vector<Aggregate> &aggs, const std::filesystem::path &path)
{
    const bool medians = !aggs.empty() && aggs.front().se_median.has_value();
    std::ofstream out = open_out(path);
    out << "scheme,n,k,count,failed,se_mean,se_stderr,ee_mean,ee_stderr,p_total_mean";
    if (medians)
        out << ",se_median,ee_median";
    out << '\n';
    for (const auto &a : aggs)
    {
        out << scheme_name(a.scheme) << ',' << a.n << ',' << a.k << ',' << a.count << ',' << a.failed << ','
            << num(a.se_mean) << ',' << num(a.se_stderr) << ',' << num(a.ee_mean) << ',' << num(a.ee_stderr) << ','
            << num(a.p_total_mean);
        if (medians)
            out << ',' << num(a.se_median.value_or(std::nan(""))) << ',' << num(a.ee_median.value_or(std::nan("")));
        out << '\n';
    }
    finish(out, path);
}

void write_results(const SweepResult &sweep, const std::filesystem::path &path)
{
    write_results(sweep.rows, path);
    write_aggregates(sweep.aggregates, aggregate_path(path));
}

std::vector<TrialResult> read_results(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw std::runtime_error(path.string() + ": missing or unexpected CSV header");
    std::vector<TrialResult> rows;
    int lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 11)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 11 fields");
        TrialResult r;
        r.scheme = parse_scheme(f[0]);
        r.n = std::stoi(f[1]);
        r.k = std::stoi(f[2]);
        r.trial = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.se = parse_double(f[5], path, lineno);
        r.ee = parse_double(f[6], path, lineno);
        r.total_power = parse_double(f[7], path, lineno);
        r.iterations = std::stoi(f[8]);
        r.converged = f[9] == "1";
        r.flags = f[10];
        r.failed = r.flags.find("failed:") != std::string::npos;
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace hrris
