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
#include "plot.hpp"

#include "mmhp/numerics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr const char *version = "1.0.0";

struct Options
{
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<std::string> snr;
    std::optional<std::string> algorithms;
    std::optional<unsigned> threads;
    std::optional<double> bin_width;
    std::string out = ".";
    bool plot = false;
};

class OutputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("-c,--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("-p,--preset", o.preset, "fig3a, fig3b, fig4, fig6 or fig7");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--runs", o.runs, "channel realizations per SNR point");
    cmd->add_option("--snr", o.snr, "SNR grid in dB: start:step:stop or a comma list");
    cmd->add_option("--algorithms", o.algorithms, "comma-separated algorithm names");
    cmd->add_option("--threads", o.threads, "worker threads, 0 for all cores");
    cmd->add_option("-o,--out", o.out, "output directory");
}

mmhp::cli::Settings resolve(const Options &o, bool runs_are_bench)
{
    using namespace mmhp::cli;
    std::vector<ConfigEntry> entries;
    std::string preset_name = o.preset;
    if (!o.config_path.empty())
    {
        std::ifstream in(o.config_path);
        if (!in)
            throw mmhp::ConfigError("cannot read " + o.config_path);
        entries = parse_config(in, o.config_path);
        for (const ConfigEntry &e : entries)
            if (e.key == "preset" && preset_name.empty())
                preset_name = e.value;
    }
    Settings s = preset_name.empty() ? default_settings() : preset(preset_name);
    if (preset_name.empty())
        s.scenario.algorithms = mmhp::all_algorithms();
    apply_entries(s, entries, o.config_path);

    if (o.seed)
        s.scenario.seed = *o.seed;
    if (o.runs)
        (runs_are_bench ? s.bench_runs : s.scenario.runs) = *o.runs;
    if (o.snr)
        s.scenario.snr_db = parse_snr_grid(*o.snr);
    if (o.algorithms)
        s.scenario.algorithms = parse_algorithm_list(*o.algorithms);
    if (o.threads)
        s.scenario.threads = *o.threads;
    if (o.bin_width)
        s.bin_width = *o.bin_width;
    if (o.plot)
        s.plot = true;
    s.scenario.validate();
    return s;
}

json config_json(const mmhp::cli::Settings &s)
{
    const mmhp::ScenarioConfig &c = s.scenario;
    json algs = json::array();
    for (mmhp::Algorithm a : c.algorithms)
        algs.push_back(mmhp::algorithm_name(a));
    return {{"name", s.name},
            {"users", c.num_users},
            {"paths", c.num_paths},
            {"bs_array", std::to_string(c.bs.rows) + "x" + std::to_string(c.bs.cols)},
            {"ms_array", std::to_string(c.ms.rows) + "x" + std::to_string(c.ms.cols)},
            {"n_rf", c.n_rf},
            {"n_rf_ms", c.effective_n_rf_ms()},
            {"snr_db", c.snr_db},
            {"runs", c.runs},
            {"seed", c.seed},
            {"algorithms", algs},
            {"threads", c.threads},
            {"cond_limit", c.cond_limit},
            {"capacity_tol", c.capacity_tol},
            {"capacity_max_iters", c.capacity_max_iters},
            {"histogram_snr_db", s.histogram_snr_db},
            {"bin_width", s.bin_width},
            {"bench_runs", s.bench_runs}};
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
        throw OutputError("cannot write " + path.string());
}

void write_manifest(const fs::path &dir, const std::string &command, const mmhp::cli::Settings &s,
                    const std::vector<fs::path> &outputs, json extra = json::object())
{
    json files = json::array();
    for (const fs::path &p : outputs)
        files.push_back(p.filename().string());
    json m{{"tool", "mmhp"},
           {"version", version},
           {"command", command},
           {"timestamp", utc_timestamp()},
           {"seed", s.scenario.seed},
           {"config", config_json(s)},
           {"outputs", files}};
    m.update(extra);
    const fs::path path = dir / (s.name + "_" + command + ".manifest.json");
    write_file(path, m.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
}

fs::path prepare_dir(const std::string &out)
{
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out))
        throw OutputError("cannot create output directory " + out);
    return fs::path(out);
}

void cmd_simulate(const Options &o)
{
    const mmhp::cli::Settings s = resolve(o, false);
    const fs::path dir = prepare_dir(o.out);
    const mmhp::MonteCarloResult result = mmhp::run_monte_carlo(s.scenario);

    std::string csv = "snr_db,algorithm,mean_sum_rate_bpcu,std_error,runs_used,failures\n";
    long failures = 0;
    for (const mmhp::CurvePoint &p : result.points)
        for (const mmhp::AlgorithmStats &st : p.stats)
        {
            csv += num(p.snr_db) + "," + mmhp::algorithm_name(st.algorithm) + "," + num(st.mean) + "," +
                   num(st.std_error) + "," + std::to_string(st.runs_used) + "," + std::to_string(st.failures) + "\n";
            failures += st.failures;
        }
    std::vector<fs::path> outputs{dir / (s.name + ".csv")};
    write_file(outputs[0], csv);
    std::cout << "wrote " << outputs[0].string() << "\n";
    if (s.plot)
    {
        outputs.push_back(dir / (s.name + ".svg"));
        write_file(outputs.back(), mmhp::cli::render_curves_svg(result, s.name));
        std::cout << "wrote " << outputs.back().string() << "\n";
    }
    if (failures > 0)
        std::cerr << "warning: " << failures << " solver failures excluded from the means\n";
    write_manifest(dir, "simulate", s, outputs, {{"total_failures", failures}});
}

void cmd_histogram(const Options &o)
{
    mmhp::cli::Settings s = resolve(o, false);
    double snr = s.histogram_snr_db;
    if (o.snr)
    {
        if (s.scenario.snr_db.size() != 1)
            throw mmhp::ConfigError("histogram: --snr must name a single SNR");
        snr = s.scenario.snr_db.front();
    }
    std::vector<mmhp::Algorithm> algs;
    for (mmhp::Algorithm a : s.scenario.algorithms)
        if (a != mmhp::Algorithm::capacity)
            algs.push_back(a);
    const fs::path dir = prepare_dir(o.out);
    const mmhp::GainHistogram h = mmhp::gain_histogram(s.scenario, snr, algs, s.bin_width);

    std::string csv = "algorithm,bin_lower,bin_upper,count,fraction\n";
    json means = json::object();
    for (const mmhp::HistogramSeries &series : h.series)
    {
        for (std::size_t i = 0; i < series.counts.size(); ++i)
        {
            const double frac =
                series.total > 0 ? static_cast<double>(series.counts[i]) / static_cast<double>(series.total) : 0.0;
            csv += std::string(mmhp::algorithm_name(series.algorithm)) + "," + num(h.edges[i]) + "," +
                   num(h.edges[i + 1]) + "," + std::to_string(series.counts[i]) + "," + num(frac) + "\n";
        }
        means[mmhp::algorithm_name(series.algorithm)] = {
            {"mean_gain", series.mean_gain}, {"streams", series.total}, {"failures", series.failures}};
    }
    const fs::path path = dir / (s.name + "_histogram.csv");
    write_file(path, csv);
    std::cout << "wrote " << path.string() << "\n";
    write_manifest(dir, "histogram", s, {path}, {{"histogram_snr_db", snr}, {"series", means}});
}

void cmd_bench(const Options &o)
{
    mmhp::cli::Settings s = resolve(o, true);
    if (s.bench_runs < 1)
        throw mmhp::ConfigError("bench_runs must be positive");
    mmhp::ScenarioConfig c = s.scenario;
    c.runs = s.bench_runs;
    const fs::path dir = prepare_dir(o.out);
    const std::vector<mmhp::BenchRow> rows = mmhp::benchmark(c);

    std::string csv = "algorithm,n_bs,n_ms,k,l,median_ms\n";
    for (const mmhp::BenchRow &r : rows)
        csv += std::string(mmhp::algorithm_name(r.algorithm)) + "," + std::to_string(c.bs.size()) + "," +
               std::to_string(c.ms.size()) + "," + std::to_string(c.num_users) + "," +
               std::to_string(c.num_paths) + "," + num(r.median_ms) + "\n";
    const fs::path path = dir / (s.name + "_bench.csv");
    write_file(path, csv);
    std::cout << "wrote " << path.string() << "\n";
    write_manifest(dir, "bench", s, {path}, {{"bench_snr_db", c.snr_db.front()}});
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multiuser hybrid precoding simulator for millimeter-wave downlinks"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    Options sim, hist, bench;
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo sum rate against SNR");
    add_common(simulate, sim);
    simulate->add_flag("--plot", sim.plot, "also write an SVG plot");
    CLI::App *histogram = app.add_subcommand("histogram", "histogram of per-stream effective gains");
    add_common(histogram, hist);
    histogram->add_option("--bin-width", hist.bin_width, "bin width of the gain histogram");
    CLI::App *bencher = app.add_subcommand("bench", "median runtime per algorithm");
    add_common(bencher, bench);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        if (simulate->parsed())
            cmd_simulate(sim);
        else if (histogram->parsed())
            cmd_histogram(hist);
        else
            cmd_bench(bench);
    }
    catch (const mmhp::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    catch (const OutputError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const mmhp::NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
