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

#include <cmath>
#include <stdexcept>
#include <utility>

namespace mmhp
{

namespace
{

template <class Selector>
AllocationResult allocate(int n_bs, int n_ms, const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                          Selector &&select)
{
    if (channels.empty())
        throw std::invalid_argument("allocation: no users");
    if (n_rf < 1 || n_rf > n_bs)
        throw std::invalid_argument("allocation: need 1 <= N_RF <= N_BS");
    if (!(budget > 0.0))
        throw std::invalid_argument("allocation: power budget must be positive");

    AllocationResult out{AllocationState(n_bs, n_ms, static_cast<int>(channels.size())), PowerAllocation{}, {},
                         StopReason::rf_limit};
    out.power.budget = budget;
    double previous_rate = 0.0;

    for (int i = 0; i < n_rf; ++i)
    {
        std::optional<StreamChoice> choice = select(out.state);
        if (!choice)
        {
            out.stop_reason = StopReason::no_candidate;
            break;
        }

        AllocationState trial = out.state;
        trial.append(choice->user, choice->g, choice->q, channels[static_cast<std::size_t>(choice->user)]);

        RVector gains;
        try
        {
            gains = zero_forcing_gains(trial);
        }
        catch (const NumericalError &)
        {
            out.stop_reason = StopReason::numerical;
            break;
        }

        PowerAllocation power = waterfill(gains, budget);
        const double rate = power.sum_rate();
        if (!(rate > previous_rate))
        {
            out.stop_reason = StopReason::rate_not_increasing;
            break;
        }

        out.state = std::move(trial);
        out.power = std::move(power);
        out.rate_history.push_back(rate);
        previous_rate = rate;
    }
    return out;
}

PrecodingSolution assemble(const AllocationState &state, int streams, const CMatrix &stream_precoders)
{
    PrecodingSolution sol;
    const auto users = static_cast<std::size_t>(state.num_users());
    sol.stream_users.assign(state.stream_users().begin(), state.stream_users().begin() + streams);
    sol.stream_precoders = stream_precoders;
    sol.stream_equalizers.resize(state.n_ms(), streams);

    std::vector<int> per_user(users, 0);
    for (int u : sol.stream_users)
        ++per_user[static_cast<std::size_t>(u)];
    for (std::size_t k = 0; k < users; ++k)
    {
        sol.precoders.emplace_back(state.n_bs(), per_user[k]);
        sol.equalizers.emplace_back(state.n_ms(), per_user[k]);
    }

    std::vector<int> filled(users, 0);
    for (int j = 0; j < streams; ++j)
    {
        const auto k = static_cast<std::size_t>(sol.stream_users[static_cast<std::size_t>(j)]);
        const CVector &g = state.equalizers()[static_cast<std::size_t>(j)];
        sol.stream_equalizers.col(j) = g;
        sol.precoders[k].col(filled[k]) = stream_precoders.col(j);
        sol.equalizers[k].col(filled[k]) = g;
        ++filled[k];
    }
    return sol;
}

} // namespace

const char *to_string(StopReason reason)
{
    switch (reason)
    {
    case StopReason::rf_limit:
        return "rf_limit";
    case StopReason::rate_not_increasing:
        return "rate_not_increasing";
    case StopReason::no_candidate:
        return "no_candidate";
    case StopReason::numerical:
        return "numerical";
    }
    return "unknown";
}

CMatrix phase_project(const CMatrix &m, double modulus)
{
    return m.unaryExpr([modulus](const cplx &z) {
        if (z == cplx(0.0, 0.0))
            return cplx(modulus, 0.0);
        return z * (modulus / std::abs(z));
    });
}

CVector phase_project(const CVector &v, double modulus)
{
    return phase_project(CMatrix(v), modulus).col(0);
}

RVector zero_forcing_gains(const AllocationState &state, double cond_limit)
{
    const CMatrix inv = invert_lower_triangular(state.lower_factor(), cond_limit);
    return inv.colwise().norm().cwiseInverse().transpose();
}

CMatrix digital_second_stage(const AllocationState &state, const RVector &powers, double cond_limit)
{
    if (powers.size() != state.streams())
        throw std::invalid_argument("digital_second_stage: one power per stream required");
    const CMatrix inv = invert_lower_triangular(state.lower_factor(), cond_limit);
    const RVector gains = inv.colwise().norm().cwiseInverse().transpose();
    const RVector scale = gains.cwiseProduct(powers.cwiseSqrt());
    return state.auxiliary_precoders() * inv * scale.cast<cplx>().asDiagonal();
}

PrecodingSolution assemble_digital(const AllocationResult &allocation)
{
    const AllocationState &state = allocation.state;
    const int d = state.streams();
    CMatrix p_eff(state.n_bs(), 0);
    if (d > 0)
        p_eff = digital_second_stage(state, allocation.power.powers);

    PrecodingSolution sol = assemble(state, d, p_eff);
    sol.power = allocation.power;
    sol.sum_rate = d > 0 ? allocation.power.sum_rate() : 0.0;
    sol.rate_history = allocation.rate_history;
    sol.stop_reason = allocation.stop_reason;
    return sol;
}

PrecodingSolution hybridize(const AllocationResult &allocation, double budget, double cond_limit)
{
    const AllocationState &state = allocation.state;
    const int d = state.streams();
    const double modulus = 1.0 / std::sqrt(static_cast<double>(state.n_bs()));

    if (d == 0)
    {
        PrecodingSolution sol = assemble_digital(allocation);
        sol.hybrid = HybridFactorization{CMatrix(state.n_bs(), 0), CMatrix(0, 0)};
        return sol;
    }

    int retries = 0;
    for (int keep = d; keep >= 1; --keep)
    {
        const CMatrix analog = phase_project(CMatrix(state.auxiliary_precoders().leftCols(keep)), modulus);
        // L Q^H equals the composite channel because every g^H H lies in the span of the q's.
        const CMatrix distorted = state.composite_channel().topRows(keep) * analog;

        CMatrix inv;
        try
        {
            inv = guarded_inverse(distorted, cond_limit);
        }
        catch (const IllConditionedError &)
        {
            ++retries;
            continue;
        }

        const RVector gains = (analog * inv).colwise().norm().cwiseInverse().transpose();
        PowerAllocation power = waterfill(gains, budget);
        const RVector scale = gains.cwiseProduct(power.powers.cwiseSqrt());
        CMatrix digital = inv * scale.cast<cplx>().asDiagonal();
        CMatrix p_eff = analog * digital;

        PrecodingSolution sol = assemble(state, keep, p_eff);
        sol.power = std::move(power);
        sol.sum_rate = sol.power.sum_rate();
        sol.hybrid = HybridFactorization{analog, std::move(digital)};
        sol.rate_history.assign(allocation.rate_history.begin(), allocation.rate_history.begin() + keep);
        sol.stop_reason = allocation.stop_reason;
        sol.hybrid_retries = retries;
        return sol;
    }
    throw NumericalError("hybridize: no stream subset admits an invertible digital stage");
}

AllocationResult allocate_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                               const SelectionPolicy &policy)
{
    if (channels.empty())
        throw std::invalid_argument("run_lisa: no users");
    const auto n_ms = static_cast<int>(channels.front().rows());
    const auto n_bs = static_cast<int>(channels.front().cols());
    return allocate(n_bs, n_ms, channels, n_rf, budget,
                    [&](const AllocationState &s) { return lisa_select_stream(s, channels, policy); });
}

AllocationResult allocate_lc_lisa(const GeometricChannels &geo, int n_rf, double budget,
                                  const SelectionPolicy &policy)
{
    return allocate(geo.bs().size(), geo.ms().size(), geo.channels(), n_rf, budget,
                    [&](const AllocationState &s) { return lc_select_stream(s, geo, policy); });
}

PrecodingSolution run_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                           const SelectionPolicy &policy)
{
    return assemble_digital(allocate_lisa(channels, n_rf, budget, policy));
}

PrecodingSolution run_h_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                             const SelectionPolicy &policy)
{
    return hybridize(allocate_lisa(channels, n_rf, budget, policy), budget);
}

PrecodingSolution run_lc_lisa(const GeometricChannels &geo, int n_rf, double budget, const SelectionPolicy &policy)
{
    return assemble_digital(allocate_lc_lisa(geo, n_rf, budget, policy));
}

PrecodingSolution run_lc_h_lisa(const GeometricChannels &geo, int n_rf, double budget, const SelectionPolicy &policy)
{
    return hybridize(allocate_lc_lisa(geo, n_rf, budget, policy), budget);
}

PrecodingSolution run_lc_lisa(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs, const ArrayGeometry &ms,
                              int n_rf, double budget, const SelectionPolicy &policy)
{
    return run_lc_lisa(GeometricChannels(path_sets, bs, ms), n_rf, budget, policy);
}

PrecodingSolution run_lc_h_lisa(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs,
                                const ArrayGeometry &ms, int n_rf, double budget, const SelectionPolicy &policy)
{
    return run_lc_h_lisa(GeometricChannels(path_sets, bs, ms), n_rf, budget, policy);
}

} // namespace mmhp
