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

#include "mmhp/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace mmhp
{

namespace
{

struct NamedAlgorithm
{
    Algorithm algorithm;
    const char *name;
};

constexpr NamedAlgorithm algorithm_table[] = {
    {Algorithm::smuhpa, "2SMUHPA"},
    {Algorithm::smuhpa_wf, "2SMUHPA-WF"},
    {Algorithm::lisa, "LISA"},
    {Algorithm::lc_lisa, "LC-LISA"},
    {Algorithm::h_lisa, "H-LISA"},
    {Algorithm::lc_h_lisa, "LC-H-LISA"},
    {Algorithm::h_lisa_ams, "H-LISA-AMS"},
    {Algorithm::lc_h_lisa_ams, "LC-H-LISA-AMS"},
    {Algorithm::bd, "BD"},
    {Algorithm::capacity, "CAPACITY"},
};

double snr_to_power(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// Runs fn(i) for i in [0, count) on `threads` workers. The first exception is rethrown.
template <typename Fn>
void parallel_for(int count, unsigned threads, Fn fn)
{
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(count, 1)));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        while (true)
        {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                const std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    if (workers <= 1)
    {
        body();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body);
        for (std::thread &t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
}

AlgorithmStats aggregate(Algorithm algorithm, const std::vector<double> &values)
{
    AlgorithmStats s;
    s.algorithm = algorithm;
    double sum = 0.0;
    for (double v : values)
    {
        if (std::isfinite(v))
        {
            sum += v;
            ++s.runs_used;
        }
        else
        {
            ++s.failures;
        }
    }
    if (s.runs_used == 0)
    {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.std_error = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.mean = sum / s.runs_used;
    if (s.runs_used > 1)
    {
        double ss = 0.0;
        for (double v : values)
            if (std::isfinite(v))
                ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / (s.runs_used - 1) / s.runs_used);
    }
    return s;
}

} // namespace

double audited_sum_rate(const std::vector<CMatrix> &precoders, const std::vector<CMatrix> &equalizers,
                    const std::vector<ChannelMatrix> &channels)
{
    if (precoders.size() != channels.size() || equalizers.size() != channels.size())
        throw std::invalid_argument("audited_sum_rate: per-user counts differ");

    double total = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k)
    {
        const CMatrix &g = equalizers[k];
        if (g.cols() == 0)
            continue;
        if (g.rows() != channels[k].rows() || precoders[k].cols() != g.cols())
            throw std::invalid_argument("audited_sum_rate: inconsistent shapes");

        const CMatrix a = g.adjoint() * channels[k];
        CMatrix noise = g.adjoint() * g;
        for (std::size_t j = 0; j < channels.size(); ++j)
        {
            if (j == k || precoders[j].cols() == 0)
                continue;
            const CMatrix x = a * precoders[j];
            noise.noalias() += x * x.adjoint();
        }
        const CMatrix desired = a * precoders[k];
        const CMatrix signal = noise + desired * desired.adjoint();
        total += log2_det_hpd(signal) - log2_det_hpd(noise);
    }
    return total;
}

const char *algorithm_name(Algorithm algorithm)
{
    for (const NamedAlgorithm &entry : algorithm_table)
        if (entry.algorithm == algorithm)
            return entry.name;
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name)
{
    for (const NamedAlgorithm &entry : algorithm_table)
        if (name == entry.name)
            return entry.algorithm;
    return std::nullopt;
}

std::vector<Algorithm> all_algorithms()
{
    std::vector<Algorithm> out;
    for (const NamedAlgorithm &entry : algorithm_table)
        out.push_back(entry.algorithm);
    return out;
}

void ScenarioConfig::validate() const
{
    if (num_users < 1)
        throw ConfigError("users must be at least 1");
    if (num_paths < 1)
        throw ConfigError("paths must be at least 1");
    if (n_rf < 1 || n_rf > bs.size())
        throw ConfigError("n_rf must lie in [1, N_BS]");
    if (n_rf_ms && (*n_rf_ms < 1 || *n_rf_ms > ms.size()))
        throw ConfigError("n_rf_ms must lie in [1, N_MS]");
    if (snr_db.empty())
        throw ConfigError("SNR grid is empty");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("SNR values must be finite");
    if (runs < 1)
        throw ConfigError("runs must be at least 1");
    if (algorithms.empty())
        throw ConfigError("algorithm list is empty");
    if (!(cond_limit > 1.0))
        throw ConfigError("cond_limit must exceed 1");
    if (!(capacity_tol > 0.0) || capacity_max_iters < 1)
        throw ConfigError("capacity tolerance and iteration limit must be positive");
    for (Algorithm a : algorithms)
    {
        if ((a == Algorithm::smuhpa || a == Algorithm::smuhpa_wf) && num_users != n_rf)
            throw ConfigError(std::string(algorithm_name(a)) + " requires users == n_rf");
        if (a == Algorithm::bd && (ms.size() > n_rf || n_rf % ms.size() != 0))
            throw ConfigError("BD requires N_MS to divide n_rf");
    }
}

RunInputs::RunInputs(std::vector<PathSet> paths, const ArrayGeometry &bs, const ArrayGeometry &ms)
    : path_sets(paths), geometric(std::move(paths), bs, ms), codebooks(build_path_codebooks(path_sets, bs, ms))
{
}

RunInputs make_run_inputs(const ScenarioConfig &config, int run)
{
    const std::uint64_t seed = derive_stream_seed(config.seed, static_cast<std::uint64_t>(run));
    return RunInputs(sample_scenario(seed, config.num_users, config.num_paths), config.bs, config.ms);
}

PrecodingSolution solve(Algorithm algorithm, const ScenarioConfig &config, const RunInputs &inputs, double power)
{
    const SelectionPolicy analog_ms = apply_ms_analog_constraints({}, config.effective_n_rf_ms(), config.ms.size());
    switch (algorithm)
    {
    case Algorithm::smuhpa:
        return run_2smuhpa(inputs.channels(), inputs.codebooks, power, PowerMode::equal, config.cond_limit);
    case Algorithm::smuhpa_wf:
        return run_2smuhpa(inputs.channels(), inputs.codebooks, power, PowerMode::waterfilling, config.cond_limit);
    case Algorithm::lisa:
        return run_lisa(inputs.channels(), config.n_rf, power);
    case Algorithm::lc_lisa:
        return run_lc_lisa(inputs.geometric, config.n_rf, power);
    case Algorithm::h_lisa:
        return hybridize(allocate_lisa(inputs.channels(), config.n_rf, power), power, config.cond_limit);
    case Algorithm::lc_h_lisa:
        return hybridize(allocate_lc_lisa(inputs.geometric, config.n_rf, power), power, config.cond_limit);
    case Algorithm::h_lisa_ams:
        return hybridize(allocate_lisa(inputs.channels(), config.n_rf, power, analog_ms), power, config.cond_limit);
    case Algorithm::lc_h_lisa_ams:
        return hybridize(allocate_lc_lisa(inputs.geometric, config.n_rf, power, analog_ms), power,
                         config.cond_limit);
    case Algorithm::bd:
        return run_bd(inputs.channels(), power, config.n_rf).solution;
    case Algorithm::capacity:
        break;
    }
    throw std::invalid_argument("solve: the capacity bound has no precoders");
}

double evaluate(Algorithm algorithm, const ScenarioConfig &config, const RunInputs &inputs, double power)
{
    if (algorithm == Algorithm::capacity)
        return dpc_sum_capacity(inputs.channels(), power, config.capacity_tol, config.capacity_max_iters).capacity;
    const PrecodingSolution sol = solve(algorithm, config, inputs, power);
    return audited_sum_rate(sol.precoders, sol.equalizers, inputs.channels());
}

MonteCarloResult run_monte_carlo(const ScenarioConfig &config)
{
    config.validate();
    const std::size_t n_snr = config.snr_db.size();
    const std::size_t n_alg = config.algorithms.size();
    const auto n_runs = static_cast<std::size_t>(config.runs);

    MonteCarloResult result;
    result.samples.assign(n_snr, std::vector<std::vector<double>>(n_alg, std::vector<double>(n_runs)));

    parallel_for(config.runs, config.threads, [&](int run) {
        const RunInputs inputs = make_run_inputs(config, run);
        for (std::size_t s = 0; s < n_snr; ++s)
        {
            const double power = snr_to_power(config.snr_db[s]);
            for (std::size_t a = 0; a < n_alg; ++a)
            {
                double value;
                try
                {
                    value = evaluate(config.algorithms[a], config, inputs, power);
                }
                catch (const NumericalError &)
                {
                    value = std::numeric_limits<double>::quiet_NaN();
                }
                result.samples[s][a][static_cast<std::size_t>(run)] = value;
            }
        }
    });

    for (std::size_t s = 0; s < n_snr; ++s)
    {
        CurvePoint point;
        point.snr_db = config.snr_db[s];
        for (std::size_t a = 0; a < n_alg; ++a)
            point.stats.push_back(aggregate(config.algorithms[a], result.samples[s][a]));
        result.points.push_back(std::move(point));
    }
    return result;
}

GainHistogram gain_histogram(const ScenarioConfig &config, double snr_db, const std::vector<Algorithm> &algorithms,
                             double bin_width)
{
    config.validate();
    if (algorithms.empty())
        throw ConfigError("histogram: algorithm list is empty");
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::capacity) != algorithms.end())
        throw ConfigError("histogram: the capacity bound has no per-stream gains");
    if (!(bin_width > 0.0))
        throw ConfigError("histogram: bin width must be positive");

    const double power = snr_to_power(snr_db);
    const std::size_t n_alg = algorithms.size();
    // gains[a][r]: per-stream gains of algorithm a in run r; empty with failed[a][r] on failure.
    std::vector<std::vector<std::vector<double>>> gains(n_alg, std::vector<std::vector<double>>(
                                                                   static_cast<std::size_t>(config.runs)));
    std::vector<std::vector<char>> failed(n_alg, std::vector<char>(static_cast<std::size_t>(config.runs), 0));

    parallel_for(config.runs, config.threads, [&](int run) {
        const RunInputs inputs = make_run_inputs(config, run);
        const auto r = static_cast<std::size_t>(run);
        for (std::size_t a = 0; a < n_alg; ++a)
        {
            try
            {
                const PrecodingSolution sol = solve(algorithms[a], config, inputs, power);
                gains[a][r].assign(sol.power.gains.data(), sol.power.gains.data() + sol.power.gains.size());
            }
            catch (const NumericalError &)
            {
                failed[a][r] = 1;
            }
        }
    });

    double largest = 0.0;
    for (const auto &per_alg : gains)
        for (const auto &per_run : per_alg)
            for (double g : per_run)
                largest = std::max(largest, g);

    GainHistogram h;
    h.snr_db = snr_db;
    h.bin_width = bin_width;
    const auto bins = static_cast<std::size_t>(std::floor(largest / bin_width)) + 1;
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges.push_back(static_cast<double>(i) * bin_width);

    for (std::size_t a = 0; a < n_alg; ++a)
    {
        HistogramSeries series;
        series.algorithm = algorithms[a];
        series.counts.assign(bins, 0);
        double sum = 0.0;
        for (std::size_t r = 0; r < gains[a].size(); ++r)
        {
            series.failures += failed[a][r];
            for (double g : gains[a][r])
            {
                const auto bin = std::min(bins - 1, static_cast<std::size_t>(std::floor(g / bin_width)));
                ++series.counts[bin];
                ++series.total;
                sum += g;
            }
        }
        series.mean_gain = series.total > 0 ? sum / static_cast<double>(series.total) : 0.0;
        h.series.push_back(std::move(series));
    }
    return h;
}

std::vector<BenchRow> benchmark(const ScenarioConfig &config)
{
    config.validate();
    using clock = std::chrono::steady_clock;
    const double power = snr_to_power(config.snr_db.front());
    const SelectionPolicy analog_ms = apply_ms_analog_constraints({}, config.effective_n_rf_ms(), config.ms.size());

    std::vector<std::vector<double>> times(config.algorithms.size());
    for (int run = 0; run < config.runs; ++run)
    {
        const RunInputs inputs = make_run_inputs(config, run);
        for (std::size_t a = 0; a < config.algorithms.size(); ++a)
        {
            const Algorithm alg = config.algorithms[a];
            const auto start = clock::now();
            try
            {
                switch (alg)
                {
                case Algorithm::lc_lisa:
                    run_lc_lisa(inputs.path_sets, config.bs, config.ms, config.n_rf, power);
                    break;
                case Algorithm::lc_h_lisa:
                    run_lc_h_lisa(inputs.path_sets, config.bs, config.ms, config.n_rf, power);
                    break;
                case Algorithm::lc_h_lisa_ams:
                    run_lc_h_lisa(inputs.path_sets, config.bs, config.ms, config.n_rf, power, analog_ms);
                    break;
                case Algorithm::capacity:
                    dpc_sum_capacity(inputs.channels(), power, config.capacity_tol, config.capacity_max_iters);
                    break;
                default:
                    solve(alg, config, inputs, power);
                    break;
                }
            }
            catch (const NumericalError &)
            {
            }
            const std::chrono::duration<double, std::milli> elapsed = clock::now() - start;
            times[a].push_back(elapsed.count());
        }
    }

    std::vector<BenchRow> rows;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    {
        std::vector<double> &t = times[a];
        std::sort(t.begin(), t.end());
        const std::size_t n = t.size();
        BenchRow row;
        row.algorithm = config.algorithms[a];
        row.runs = static_cast<int>(n);
        row.median_ms = n % 2 == 1 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace mmhp
