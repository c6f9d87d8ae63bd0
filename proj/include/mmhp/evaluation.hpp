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

#ifndef MMHP_EVALUATION_HPP
#define MMHP_EVALUATION_HPP

#include "mmhp/baselines.hpp"
#include "mmhp/channel.hpp"
#include "mmhp/precoding.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmhp
{

/// Sum rate of the given per-user precoders and equalizers, each user treating the other
/// users' signals as noise after its equalizer. Users without streams contribute nothing.
double audited_sum_rate(const std::vector<CMatrix> &precoders, const std::vector<CMatrix> &equalizers,
                    const std::vector<ChannelMatrix> &channels);

enum class Algorithm
{
    smuhpa,
    smuhpa_wf,
    lisa,
    lc_lisa,
    h_lisa,
    lc_h_lisa,
    h_lisa_ams,
    lc_h_lisa_ams,
    bd,
    capacity,
};

const char *algorithm_name(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::vector<Algorithm> all_algorithms();

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig
{
    int num_users = 8;
    int num_paths = 3;
    ArrayGeometry bs{8, 8};
    ArrayGeometry ms{1, 1};
    int n_rf = 8;
    std::optional<int> n_rf_ms; // N_MS when unset
    std::vector<double> snr_db;
    int runs = 1000;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms;
    unsigned threads = 0; // 0: hardware concurrency
    double cond_limit = default_cond_limit; // digital stages of the hybrid schemes
    double capacity_tol = 1e-6;
    int capacity_max_iters = 1000;

    int effective_n_rf_ms() const { return n_rf_ms.value_or(ms.size()); }

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

struct AlgorithmStats
{
    Algorithm algorithm = Algorithm::lisa;
    double mean = 0.0;
    double std_error = 0.0;
    int runs_used = 0;
    int failures = 0;
};

struct CurvePoint
{
    double snr_db = 0.0;
    std::vector<AlgorithmStats> stats; // same order as ScenarioConfig::algorithms
};

struct MonteCarloResult
{
    std::vector<CurvePoint> points;
    /// samples[s][a][r]: audited rate of algorithm a in run r at SNR s, NaN on failure.
    std::vector<std::vector<std::vector<double>>> samples;
};

/// Everything an algorithm may need about one channel realization.
struct RunInputs
{
    std::vector<PathSet> path_sets;
    GeometricChannels geometric;
    BeamsteeringCodebooks codebooks;

    RunInputs(std::vector<PathSet> paths, const ArrayGeometry &bs, const ArrayGeometry &ms);
    const std::vector<ChannelMatrix> &channels() const { return geometric.channels(); }
};

RunInputs make_run_inputs(const ScenarioConfig &config, int run);

/// Solution of a precoding algorithm (every algorithm except the capacity bound).
PrecodingSolution solve(Algorithm algorithm, const ScenarioConfig &config, const RunInputs &inputs, double power);

/// Audited sum rate of one algorithm on one realization. Throws NumericalError on failure.
double evaluate(Algorithm algorithm, const ScenarioConfig &config, const RunInputs &inputs, double power);

/// Paired Monte-Carlo experiment: every algorithm sees the same realizations, run r uses the
/// stream seed derived from (seed, r). Results do not depend on the number of worker threads.
MonteCarloResult run_monte_carlo(const ScenarioConfig &config);

struct HistogramSeries
{
    Algorithm algorithm = Algorithm::lisa;
    std::vector<long> counts;
    long total = 0;
    double mean_gain = 0.0;
    int failures = 0;
};

struct GainHistogram
{
    double snr_db = 0.0;
    double bin_width = 0.5;
    std::vector<double> edges; // counts[i] covers [edges[i], edges[i+1])
    std::vector<HistogramSeries> series;
};

/// Distribution of the per-stream effective gains over all runs.
GainHistogram gain_histogram(const ScenarioConfig &config, double snr_db, const std::vector<Algorithm> &algorithms,
                             double bin_width = 0.5);

struct BenchRow
{
    Algorithm algorithm = Algorithm::lisa;
    double median_ms = 0.0;
    int runs = 0;
};

/// Median wall time per algorithm over `config.runs` realizations at the first SNR point,
/// single-threaded. Channel synthesis is excluded for algorithms fed with channel matrices;
/// path-domain algorithms are timed from the path parameters.
std::vector<BenchRow> benchmark(const ScenarioConfig &config);

} // namespace mmhp

#endif
