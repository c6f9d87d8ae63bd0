// SPDX-License-Identifier: Apache-2.0
//
// mmhp - multiuser hybrid precoding simulator for millimeter-wave downlinks
// Copyright (C) 2026 The mmhp authors
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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace mmhp::cli
{

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(trim(item));
    return out;
}

double to_double(const std::string &key, const std::string &text)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
}

template <typename Int>
Int to_int(const std::string &key, const std::string &text)
{
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string &key, const std::string &text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

} // namespace

Settings default_settings()
{
    Settings s;
    ScenarioConfig &c = s.scenario;
    c.num_users = 8;
    c.bs = ArrayGeometry(8, 8);
    c.n_rf = 8;
    c.snr_db = parse_snr_grid("-10:5:40");
    c.runs = 1000;
    c.seed = 1;
    return s;
}

Settings preset(const std::string &name)
{
    Settings s = default_settings();
    ScenarioConfig &c = s.scenario;
    s.name = name;
    const std::vector<Algorithm> common{Algorithm::smuhpa,  Algorithm::smuhpa_wf, Algorithm::lisa,    Algorithm::lc_lisa,
                                        Algorithm::h_lisa, Algorithm::lc_h_lisa, Algorithm::capacity};
    if (name == "fig3a" || name == "fig3b")
    {
        c.num_paths = name == "fig3a" ? 1 : 3;
        c.algorithms = common;
    }
    else if (name == "fig4")
    {
        c.num_paths = 3;
        c.algorithms = {Algorithm::lisa, Algorithm::h_lisa};
        c.snr_db = {0.0};
    }
    else if (name == "fig6")
    {
        c.num_paths = 3;
        c.ms = ArrayGeometry(2, 1);
        c.n_rf_ms = 2;
        c.algorithms = common;
        c.algorithms.push_back(Algorithm::bd);
    }
    else if (name == "fig7")
    {
        c.num_paths = 3;
        c.ms = ArrayGeometry(4, 4);
        c.n_rf_ms = 2;
        c.algorithms = common;
        c.algorithms.push_back(Algorithm::h_lisa_ams);
        c.algorithms.push_back(Algorithm::lc_h_lisa_ams);
    }
    else
    {
        throw ConfigError("unknown preset '" + name + "' (fig3a, fig3b, fig4, fig6, fig7)");
    }
    return s;
}

std::vector<ConfigEntry> parse_config(std::istream &in, const std::string &source)
{
    std::vector<ConfigEntry> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value'");
        ConfigEntry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
        if (e.key.empty())
            throw ConfigError(source + ":" + std::to_string(line) + ": missing key");
        if (e.value.empty())
            throw ConfigError(source + ":" + std::to_string(line) + ": missing value for '" + e.key + "'");
        for (const ConfigEntry &prev : out)
            if (prev.key == e.key)
                throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key '" + e.key +
                                  "' (first set on line " + std::to_string(prev.line) + ")");
        out.push_back(std::move(e));
    }
    return out;
}

void apply_setting(Settings &s, const std::string &key, const std::string &value)
{
    ScenarioConfig &c = s.scenario;
    if (key == "name")
        s.name = value;
    else if (key == "users")
        c.num_users = to_int<int>(key, value);
    else if (key == "paths")
        c.num_paths = to_int<int>(key, value);
    else if (key == "bs_array")
        c.bs = parse_geometry(value);
    else if (key == "ms_array")
        c.ms = parse_geometry(value);
    else if (key == "n_rf")
        c.n_rf = to_int<int>(key, value);
    else if (key == "n_rf_ms")
        c.n_rf_ms = to_int<int>(key, value);
    else if (key == "snr_db")
        c.snr_db = parse_snr_grid(value);
    else if (key == "runs")
        c.runs = to_int<int>(key, value);
    else if (key == "seed")
        c.seed = to_int<std::uint64_t>(key, value);
    else if (key == "algorithms")
        c.algorithms = parse_algorithm_list(value);
    else if (key == "threads")
        c.threads = to_int<unsigned>(key, value);
    else if (key == "cond_limit")
        c.cond_limit = to_double(key, value);
    else if (key == "capacity_tol")
        c.capacity_tol = to_double(key, value);
    else if (key == "capacity_max_iters")
        c.capacity_max_iters = to_int<int>(key, value);
    else if (key == "histogram_snr_db")
        s.histogram_snr_db = to_double(key, value);
    else if (key == "bin_width")
        s.bin_width = to_double(key, value);
    else if (key == "bench_runs")
        s.bench_runs = to_int<int>(key, value);
    else if (key == "plot")
        s.plot = to_bool(key, value);
    else
        throw ConfigError("unknown key '" + key + "'");
}

void apply_entries(Settings &settings, const std::vector<ConfigEntry> &entries, const std::string &source)
{
    for (const ConfigEntry &e : entries)
    {
        if (e.key == "preset")
            continue;
        try
        {
            apply_setting(settings, e.key, e.value);
        }
        catch (const ConfigError &err)
        {
            throw ConfigError(source + ":" + std::to_string(e.line) + ": " + err.what());
        }
    }
}

std::vector<double> parse_snr_grid(const std::string &text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos)
    {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw ConfigError("snr_db: expected start:step:stop");
        const double start = to_double("snr_db", parts[0]);
        const double step = to_double("snr_db", parts[1]);
        const double stop = to_double("snr_db", parts[2]);
        if (!(step > 0.0) || stop < start)
            throw ConfigError("snr_db: need step > 0 and stop >= start");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        if (n > 10000)
            throw ConfigError("snr_db: too many points");
        for (long i = 0; i <= n; ++i)
            out.push_back(start + static_cast<double>(i) * step);
    }
    else
    {
        for (const std::string &p : split(text, ','))
            out.push_back(to_double("snr_db", p));
    }
    if (out.empty())
        throw ConfigError("snr_db: empty grid");
    return out;
}

std::vector<Algorithm> parse_algorithm_list(const std::string &text)
{
    std::vector<Algorithm> out;
    for (const std::string &p : split(text, ','))
    {
        if (p.empty())
            continue;
        const auto a = parse_algorithm(p);
        if (!a)
            throw ConfigError("algorithms: unknown algorithm '" + p + "'");
        out.push_back(*a);
    }
    if (out.empty())
        throw ConfigError("algorithms: empty list");
    return out;
}

ArrayGeometry parse_geometry(const std::string &text)
{
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw ConfigError("array: expected ROWSxCOLS, got '" + text + "'");
    const int rows = to_int<int>("array", trim(text.substr(0, x)));
    const int cols = to_int<int>("array", trim(text.substr(x + 1)));
    if (rows < 1 || cols < 1)
        throw ConfigError("array: dimensions must be positive");
    return ArrayGeometry(rows, cols);
}

} // namespace mmhp::cli
