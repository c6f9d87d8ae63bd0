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

#include "mmhp/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmhp
{

namespace
{

constexpr double zero_gain = 1e-12;

bool eligible(const AllocationState &state, const SelectionPolicy &policy, int k)
{
    return !policy.max_streams_per_user ||
           state.streams_per_user()[static_cast<std::size_t>(k)] < *policy.max_streams_per_user;
}

// Applies the equalizer restriction and matches the auxiliary precoder to the final equalizer.
std::optional<StreamChoice> finish_choice(const AllocationState &state, const ChannelMatrix &h, StreamChoice choice,
                                          const SelectionPolicy &policy)
{
    if (policy.equalizer_modulus)
        choice.g = phase_project(choice.g, *policy.equalizer_modulus);
    choice.q = state.project_bs(h.adjoint() * choice.g);
    choice.gain = choice.q.norm();
    if (!(choice.gain > zero_gain))
        return std::nullopt;
    choice.q /= choice.gain;
    return choice;
}

} // namespace

SelectionPolicy apply_ms_analog_constraints(SelectionPolicy base, int n_rf_ms, int n_ms)
{
    if (n_ms < 1 || n_rf_ms < 1 || n_rf_ms > n_ms)
        throw std::invalid_argument("apply_ms_analog_constraints: need 1 <= N_RF^MS <= N_MS");
    base.max_streams_per_user = base.max_streams_per_user ? std::min(*base.max_streams_per_user, n_rf_ms) : n_rf_ms;
    base.equalizer_modulus = 1.0 / std::sqrt(static_cast<double>(n_ms));
    return base;
}

std::optional<StreamChoice> lisa_select_stream(const AllocationState &state, const std::vector<ChannelMatrix> &channels,
                                               const SelectionPolicy &policy)
{
    if (static_cast<int>(channels.size()) != state.num_users())
        throw std::invalid_argument("lisa_select_stream: channel count does not match the state");

    int best_user = -1;
    SingularTriple best;
    for (int k = 0; k < state.num_users(); ++k)
    {
        if (!eligible(state, policy, k))
            continue;
        const CMatrix projected = channels[static_cast<std::size_t>(k)] * state.bs_projector();
        SingularTriple t = max_singular_triple(projected);
        if (t.sigma > best.sigma)
        {
            best = std::move(t);
            best_user = k;
        }
    }
    if (best_user < 0 || !(best.sigma >= zero_gain))
        return std::nullopt;

    StreamChoice choice;
    choice.user = best_user;
    choice.g = std::move(best.u);
    return finish_choice(state, channels[static_cast<std::size_t>(best_user)], std::move(choice), policy);
}

GeometricChannels::GeometricChannels(std::vector<PathSet> path_sets, const ArrayGeometry &bs, const ArrayGeometry &ms)
    : path_sets_(std::move(path_sets)), bs_(bs), ms_(ms)
{
    if (path_sets_.empty())
        throw std::invalid_argument("GeometricChannels: no users");
    const double n_prod = static_cast<double>(bs.size()) * ms.size();
    for (const PathSet &ps : path_sets_)
    {
        channels_.push_back(synthesize_channel(ps, bs, ms));
        std::vector<CVector> a_bs, a_ms;
        std::vector<double> w;
        const double scale = std::sqrt(n_prod / static_cast<double>(ps.paths.size()));
        for (const Path &p : ps.paths)
        {
            a_bs.push_back(upa_response(p.aod_azimuth, p.aod_elevation, bs));
            a_ms.push_back(upa_response(p.aoa_azimuth, p.aoa_elevation, ms));
            w.push_back(scale * std::abs(p.gain));
        }
        bs_resp_.push_back(std::move(a_bs));
        ms_resp_.push_back(std::move(a_ms));
        scaled_gain_.push_back(std::move(w));
    }
}

std::optional<StreamChoice> lc_select_stream(const AllocationState &state, const GeometricChannels &geo,
                                             const SelectionPolicy &policy)
{
    if (geo.num_users() != state.num_users())
        throw std::invalid_argument("lc_select_stream: path-set count does not match the state");

    StreamChoice choice;
    CVector best_ms;
    for (int k = 0; k < geo.num_users(); ++k)
    {
        if (!eligible(state, policy, k))
            continue;
        const CMatrix &s = state.ms_projector(k);
        const int num_paths = static_cast<int>(geo.path_sets()[static_cast<std::size_t>(k)].paths.size());
        for (int l = 0; l < num_paths; ++l)
        {
            CVector ms_part = s * geo.ms_response(k, l);
            const double weight =
                geo.scaled_gain(k, l) * ms_part.norm() * state.project_bs(geo.bs_response(k, l)).norm();
            if (weight > choice.weight)
            {
                choice.weight = weight;
                choice.user = k;
                choice.path = l;
                best_ms = std::move(ms_part);
            }
        }
    }
    if (choice.user < 0 || !(choice.weight >= zero_gain))
        return std::nullopt;

    choice.g = best_ms / best_ms.norm();
    return finish_choice(state, geo.channels()[static_cast<std::size_t>(choice.user)], std::move(choice), policy);
}

} // namespace mmhp
