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

#include "mmhp/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmhp
{

ArrayGeometry::ArrayGeometry(int rows_, int cols_) : rows(rows_), cols(cols_)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ArrayGeometry: rows and cols must be positive");
}

CVector upa_response(double phi, double theta, const ArrayGeometry &geometry)
{
    const double row_phase = std::numbers::pi * std::sin(phi) * std::sin(theta);
    const double col_phase = std::numbers::pi * std::cos(theta);
    const double scale = 1.0 / std::sqrt(static_cast<double>(geometry.size()));

    CVector a(geometry.size());
    for (int m = 0; m < geometry.rows; ++m)
        for (int n = 0; n < geometry.cols; ++n)
            a[m * geometry.cols + n] = std::polar(scale, m * row_phase + n * col_phase);
    return a;
}

ChannelMatrix synthesize_channel(const PathSet &path_set, const ArrayGeometry &bs, const ArrayGeometry &ms)
{
    if (path_set.paths.empty())
        throw std::invalid_argument("synthesize_channel: empty path set");

    const double num_paths = static_cast<double>(path_set.paths.size());
    const double prefactor = std::sqrt(bs.size() * ms.size() / num_paths);

    ChannelMatrix h = ChannelMatrix::Zero(ms.size(), bs.size());
    for (const Path &p : path_set.paths)
    {
        const CVector a_ms = upa_response(p.aoa_azimuth, p.aoa_elevation, ms);
        const CVector a_bs = upa_response(p.aod_azimuth, p.aod_elevation, bs);
        h.noalias() += (prefactor * p.gain) * a_ms * a_bs.adjoint();
    }
    return h;
}

std::vector<ChannelMatrix> synthesize_channels(const std::vector<PathSet> &scenario, const ArrayGeometry &bs,
                                               const ArrayGeometry &ms)
{
    std::vector<ChannelMatrix> out;
    out.reserve(scenario.size());
    for (const PathSet &ps : scenario)
        out.push_back(synthesize_channel(ps, bs, ms));
    return out;
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t run_index)
{
    // splitmix64 finalizer over a combination of both inputs
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (run_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<PathSet> sample_scenario(Rng &rng, int num_users, int num_paths)
{
    if (num_users < 1 || num_paths < 1)
        throw std::invalid_argument("sample_scenario: K and L must be positive");

    constexpr double pi = std::numbers::pi;
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> azimuth(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> elevation(-0.5 * pi, 0.5 * pi);

    std::vector<PathSet> scenario(static_cast<std::size_t>(num_users));
    for (int k = 0; k < num_users; ++k)
    {
        PathSet &ps = scenario[static_cast<std::size_t>(k)];
        ps.user = k;
        ps.paths.resize(static_cast<std::size_t>(num_paths));
        for (Path &p : ps.paths)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            p.gain = cplx(re, im);
            p.aod_azimuth = azimuth(rng);
            p.aod_elevation = elevation(rng);
            p.aoa_azimuth = azimuth(rng);
            p.aoa_elevation = elevation(rng);
        }
    }
    return scenario;
}

std::vector<PathSet> sample_scenario(std::uint64_t seed, int num_users, int num_paths)
{
    Rng rng(seed);
    return sample_scenario(rng, num_users, num_paths);
}

} // namespace mmhp
