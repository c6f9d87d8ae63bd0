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

#ifndef MMHP_BASELINES_HPP
#define MMHP_BASELINES_HPP

#include "mmhp/channel.hpp"
#include "mmhp/precoding.hpp"

#include <vector>

namespace mmhp
{

/// Per-user beamsteering codebooks built from the true path directions.
struct BeamsteeringCodebooks
{
    std::vector<std::vector<CVector>> bs; // bs[k][l] = a_BS of path l of user k
    std::vector<std::vector<CVector>> ms; // ms[k][l] = a_MS of path l of user k
};

BeamsteeringCodebooks build_path_codebooks(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs,
                                           const ArrayGeometry &ms);

enum class PowerMode
{
    equal,
    waterfilling,
};

/// Two-stage multiuser hybrid precoding with one stream per user (K = N_RF = d).
///
/// Stage one picks, per user, the codebook pair maximizing |g^H H_k p_A| (exhaustive over the
/// L x L pairs, lowest MS then BS index on ties). Stage two zero-forces the K x K effective
/// channel digitally. Throws IllConditionedError when that channel cannot be inverted.
PrecodingSolution run_2smuhpa(const std::vector<ChannelMatrix> &channels, const BeamsteeringCodebooks &codebooks,
                              double budget, PowerMode mode, double cond_limit = default_cond_limit);

struct BdResult
{
    PrecodingSolution solution;
    std::vector<int> users; // selected subset, ascending
    int subsets_evaluated = 0;
};

/// Block diagonalization with exhaustive search over all user subsets of size
/// 1..N_RF/N_MS. Every selected user is served on all of its eigenmodes inside the null space
/// of the other selected users; power is waterfilled jointly across all eigenmodes.
BdResult run_bd(const std::vector<ChannelMatrix> &channels, double budget, int n_rf);

struct CapacityResult
{
    double capacity = 0.0; // bits per channel use
    int iterations = 0;
    bool converged = false;
    std::vector<double> history; // sum rate after each iteration
};

/// Sum capacity of the MIMO broadcast channel through the dual multiple-access channel with a
/// sum power constraint (iterative waterfilling with averaging over the previous iterate).
CapacityResult dpc_sum_capacity(const std::vector<ChannelMatrix> &channels, double budget, double tol = 1e-6,
                                int max_iters = 1000);

} // namespace mmhp

#endif
