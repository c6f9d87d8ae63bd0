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

#ifndef MMHP_CHANNEL_HPP
#define MMHP_CHANNEL_HPP

#include "mmhp/numerics.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mmhp
{

// Uniform planar array with half-wavelength spacing. A uniform linear array is rows x 1.
struct ArrayGeometry
{
    int rows = 1;
    int cols = 1;

    ArrayGeometry() = default;
    ArrayGeometry(int rows_, int cols_);

    int size() const noexcept { return rows * cols; }
    bool operator==(const ArrayGeometry &) const = default;
};

// One propagation path; all angles in radians.
struct Path
{
    cplx gain{1.0, 0.0};
    double aod_azimuth = 0.0;
    double aod_elevation = 0.0;
    double aoa_azimuth = 0.0;
    double aoa_elevation = 0.0;
};

struct PathSet
{
    int user = 0;
    std::vector<Path> paths;
};

// N_MS x N_BS channel matrix of one user.
using ChannelMatrix = CMatrix;

/// Unit-norm response of a UPA towards (azimuth `phi`, elevation `theta`).
/// Entry m * cols + n equals exp(j*pi*(m sin(phi) sin(theta) + n cos(theta))) / sqrt(rows * cols).
CVector upa_response(double phi, double theta, const ArrayGeometry &geometry);

/// Geometric channel sqrt(N_BS N_MS / L) * sum_l gain_l a_MS(l) a_BS(l)^H.
ChannelMatrix synthesize_channel(const PathSet &path_set, const ArrayGeometry &bs, const ArrayGeometry &ms);

std::vector<ChannelMatrix> synthesize_channels(const std::vector<PathSet> &scenario, const ArrayGeometry &bs,
                                               const ArrayGeometry &ms);

using Rng = std::mt19937_64;

/// Seed of the independent stream for Monte-Carlo run `run_index` under `master_seed`.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t run_index);

/// Draws K users with L paths each: azimuths uniform on [0, 2pi), elevations uniform on
/// [-pi/2, pi/2], gains CN(0, 1). Draw order per path is gain (re, im), AoD azimuth,
/// AoD elevation, AoA azimuth, AoA elevation.
std::vector<PathSet> sample_scenario(Rng &rng, int num_users, int num_paths);
std::vector<PathSet> sample_scenario(std::uint64_t seed, int num_users, int num_paths);

} // namespace mmhp

#endif
