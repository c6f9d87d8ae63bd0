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

#ifndef MMHP_PRECODING_HPP
#define MMHP_PRECODING_HPP

#include "mmhp/channel.hpp"
#include "mmhp/numerics.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mmhp
{

// ------------------------------------------------------------------------
// Power allocation
// ------------------------------------------------------------------------

/// Gains and powers of a set of parallel scalar subchannels; stream j carries
/// log2(1 + powers[j] * gains[j]^2) bits per channel use.
struct PowerAllocation
{
    RVector gains;
    RVector powers;
    double budget = 0.0;

    double sum_rate() const;
};

/// Exact waterfilling over parallel subchannels with amplitude gains `gains` and total
/// power `budget`. Throws std::invalid_argument on empty input, non-positive gains or budget.
PowerAllocation waterfill(std::span<const double> gains, double budget);
PowerAllocation waterfill(const RVector &gains, double budget);

// ------------------------------------------------------------------------
// Successive allocation state
// ------------------------------------------------------------------------

/// Bookkeeping of the greedy stream allocation: stream-to-user map, orthonormal auxiliary
/// precoders, the BS-side projector onto the common null space, per-user MS-side projectors,
/// the composite channel and its lower-triangular factor.
class AllocationState
{
public:
    AllocationState(int n_bs, int n_ms, int num_users);

    int n_bs() const noexcept { return n_bs_; }
    int n_ms() const noexcept { return n_ms_; }
    int num_users() const noexcept { return static_cast<int>(ms_projectors_.size()); }
    int streams() const noexcept { return static_cast<int>(stream_users_.size()); }

    const std::vector<int> &stream_users() const noexcept { return stream_users_; }
    const std::vector<int> &streams_per_user() const noexcept { return streams_per_user_; }
    const std::vector<CVector> &equalizers() const noexcept { return equalizers_; }

    /// N_BS x i, orthonormal columns q_1..q_i.
    const CMatrix &auxiliary_precoders() const noexcept { return aux_precoders_; }
    /// N_BS x N_BS projector onto the null space of the allocated effective channels.
    const CMatrix &bs_projector() const noexcept { return bs_projector_; }
    /// N_MS x N_MS projector onto the complement of user `k`'s allocated equalizers.
    const CMatrix &ms_projector(int k) const { return ms_projectors_.at(static_cast<std::size_t>(k)); }
    /// i x N_BS, rows g_j^H H_{pi(j)}.
    const CMatrix &composite_channel() const noexcept { return composite_; }
    /// i x i, composite_channel() * auxiliary_precoders().
    const CMatrix &lower_factor() const noexcept { return lower_; }

    /// `x - Q Q^H x`, i.e. the BS projector applied to x without forming it.
    CVector project_bs(const CVector &x) const;

    /// Appends stream (user, g, q). `h_user` is the unprojected channel of `user`.
    void append(int user, const CVector &g, const CVector &q, const ChannelMatrix &h_user);

private:
    int n_bs_;
    int n_ms_;
    std::vector<int> stream_users_;
    std::vector<int> streams_per_user_;
    std::vector<CVector> equalizers_;
    CMatrix aux_precoders_;
    CMatrix bs_projector_;
    std::vector<CMatrix> ms_projectors_;
    CMatrix composite_;
    CMatrix lower_;
};

AllocationState update_state(AllocationState state, int user, const CVector &g, const CVector &q,
                             const ChannelMatrix &h_user);

// ------------------------------------------------------------------------
// Stream selection
// ------------------------------------------------------------------------

/// Restrictions applied inside the selection step. The default is unrestricted fully-digital
/// mobile stations.
struct SelectionPolicy
{
    /// Users already holding this many streams are not candidates.
    std::optional<int> max_streams_per_user;
    /// When set, the selected equalizer is replaced by its phase-only version with this entry modulus.
    std::optional<double> equalizer_modulus;
};

/// Policy for mobile stations with `n_rf_ms` RF chains and an analog phase-shifter combiner.
SelectionPolicy apply_ms_analog_constraints(SelectionPolicy base, int n_rf_ms, int n_ms);

struct StreamChoice
{
    int user = -1;
    int path = -1; // only set by the path-domain selector
    CVector g;
    CVector q;
    double gain = 0.0; // |g^H H_user q|
    double weight = 0.0; // path weight for the path-domain selector
};

/// User with the largest dominant singular value of its projected channel H_k T.
/// Returns nullopt when no eligible user has a projected gain above 1e-12.
std::optional<StreamChoice> lisa_select_stream(const AllocationState &state, const std::vector<ChannelMatrix> &channels,
                                               const SelectionPolicy &policy = {});

/// Scenario view for the path-domain selector: path parameters, their response vectors and the
/// synthesized channel matrices (needed for the composite channel rows).
class GeometricChannels
{
public:
    GeometricChannels(std::vector<PathSet> path_sets, const ArrayGeometry &bs, const ArrayGeometry &ms);

    int num_users() const noexcept { return static_cast<int>(path_sets_.size()); }
    const ArrayGeometry &bs() const noexcept { return bs_; }
    const ArrayGeometry &ms() const noexcept { return ms_; }
    const std::vector<PathSet> &path_sets() const noexcept { return path_sets_; }
    const std::vector<ChannelMatrix> &channels() const noexcept { return channels_; }
    const CVector &bs_response(int k, int l) const { return bs_resp_[idx(k)][idx(l)]; }
    const CVector &ms_response(int k, int l) const { return ms_resp_[idx(k)][idx(l)]; }
    /// sqrt(N_BS N_MS / L_k) * |gain_{k,l}|
    double scaled_gain(int k, int l) const { return scaled_gain_[idx(k)][idx(l)]; }

private:
    static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

    std::vector<PathSet> path_sets_;
    ArrayGeometry bs_;
    ArrayGeometry ms_;
    std::vector<ChannelMatrix> channels_;
    std::vector<std::vector<CVector>> bs_resp_;
    std::vector<std::vector<CVector>> ms_resp_;
    std::vector<std::vector<double>> scaled_gain_;
};

/// Path-domain selection: picks the (user, path) with the largest weight
/// sqrt(N_BS N_MS / L_k) |alpha| ||S_k a_MS|| ||T a_BS||, uses the projected MS response as
/// equalizer and matches q to it. Returns nullopt when all weights are below 1e-12.
std::optional<StreamChoice> lc_select_stream(const AllocationState &state, const GeometricChannels &geo,
                                             const SelectionPolicy &policy = {});

// ------------------------------------------------------------------------
// Second stage and hybrid projection
// ------------------------------------------------------------------------

/// Zero-forcing gains 1 / ||column j of L^{-1}|| of the current allocation.
RVector zero_forcing_gains(const AllocationState &state, double cond_limit = default_cond_limit);

/// P_eff = Q L^{-1} Lambda Gamma^{1/2} for the given stream powers.
CMatrix digital_second_stage(const AllocationState &state, const RVector &powers,
                             double cond_limit = default_cond_limit);

/// Entry-wise `modulus * exp(j arg(m))`; zero entries map to `+modulus`.
CMatrix phase_project(const CMatrix &m, double modulus);
CVector phase_project(const CVector &v, double modulus);

// ------------------------------------------------------------------------
// Solvers
// ------------------------------------------------------------------------

enum class StopReason
{
    rf_limit,          // N_RF streams allocated
    rate_not_increasing,
    no_candidate,      // no eligible user or all projected gains vanish
    numerical,         // trial step could not be zero-forced
};

const char *to_string(StopReason reason);

struct HybridFactorization
{
    CMatrix analog;  // N_BS x d, entries of modulus 1/sqrt(N_BS)
    CMatrix digital; // d x d
};

struct PrecodingSolution
{
    std::vector<CMatrix> precoders;  // per user, N_BS x d_k
    std::vector<CMatrix> equalizers; // per user, N_MS x d_k
    std::vector<int> stream_users;   // stream -> user
    CMatrix stream_precoders;        // N_BS x d, column j is p_j
    CMatrix stream_equalizers;       // N_MS x d, column j is g_j
    PowerAllocation power;
    std::optional<HybridFactorization> hybrid;
    double sum_rate = 0.0;
    std::vector<double> rate_history; // R_sum,1 .. R_sum,d of the accepted prefix
    StopReason stop_reason = StopReason::rf_limit;
    int hybrid_retries = 0;

    int streams() const noexcept { return static_cast<int>(stream_users.size()); }
};

/// Result of the successive allocation loop before the precoders are assembled.
struct AllocationResult
{
    AllocationState state;
    PowerAllocation power;
    std::vector<double> rate_history;
    StopReason stop_reason;
};

/// Hybrid version of a completed allocation: analog part from the phase-projected auxiliary
/// precoders, digital part re-zero-forcing the distorted triangular factor, powers re-waterfilled.
/// Drops trailing streams while the digital factor is ill-conditioned; the number of dropped
/// streams is reported in `hybrid_retries`.
PrecodingSolution hybridize(const AllocationResult &allocation, double budget,
                            double cond_limit = default_cond_limit);

PrecodingSolution run_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                           const SelectionPolicy &policy = {});
PrecodingSolution run_h_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                             const SelectionPolicy &policy = {});
PrecodingSolution run_lc_lisa(const GeometricChannels &geo, int n_rf, double budget,
                              const SelectionPolicy &policy = {});
PrecodingSolution run_lc_h_lisa(const GeometricChannels &geo, int n_rf, double budget,
                                const SelectionPolicy &policy = {});
PrecodingSolution run_lc_lisa(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs,
                              const ArrayGeometry &ms, int n_rf, double budget, const SelectionPolicy &policy = {});
PrecodingSolution run_lc_h_lisa(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs,
                                const ArrayGeometry &ms, int n_rf, double budget,
                                const SelectionPolicy &policy = {});

/// Allocation loops on their own, exposed for inspection and testing.
AllocationResult allocate_lisa(const std::vector<ChannelMatrix> &channels, int n_rf, double budget,
                               const SelectionPolicy &policy = {});
AllocationResult allocate_lc_lisa(const GeometricChannels &geo, int n_rf, double budget,
                                  const SelectionPolicy &policy = {});

/// Digital precoders of a completed allocation.
PrecodingSolution assemble_digital(const AllocationResult &allocation);

} // namespace mmhp

#endif
