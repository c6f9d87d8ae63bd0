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

#include <stdexcept>

namespace mmhp
{

AllocationState::AllocationState(int n_bs, int n_ms, int num_users)
    : n_bs_(n_bs), n_ms_(n_ms), streams_per_user_(static_cast<std::size_t>(num_users), 0),
      aux_precoders_(n_bs, 0), bs_projector_(CMatrix::Identity(n_bs, n_bs)),
      ms_projectors_(static_cast<std::size_t>(num_users), CMatrix::Identity(n_ms, n_ms)), composite_(0, n_bs),
      lower_(0, 0)
{
    if (n_bs < 1 || n_ms < 1 || num_users < 1)
        throw std::invalid_argument("AllocationState: dimensions must be positive");
}

CVector AllocationState::project_bs(const CVector &x) const
{
    if (aux_precoders_.cols() == 0)
        return x;
    return x - aux_precoders_ * (aux_precoders_.adjoint() * x);
}

void AllocationState::append(int user, const CVector &g, const CVector &q, const ChannelMatrix &h_user)
{
    if (user < 0 || user >= num_users())
        throw std::out_of_range("AllocationState::append: user index out of range");
    if (g.size() != n_ms_ || q.size() != n_bs_ || h_user.rows() != n_ms_ || h_user.cols() != n_bs_)
        throw std::invalid_argument("AllocationState::append: dimension mismatch");

    const Eigen::Index i = streams();
    stream_users_.push_back(user);
    ++streams_per_user_[static_cast<std::size_t>(user)];
    equalizers_.push_back(g);

    aux_precoders_.conservativeResize(Eigen::NoChange, i + 1);
    aux_precoders_.col(i) = q;
    bs_projector_.noalias() -= q * q.adjoint();

    // Remove the component of g that is still inside the projector's range. For a g taken from
    // that range this is exactly g g^H; a phase-projected equalizer is orthogonalized first so
    // the update stays a projector.
    CMatrix &s = ms_projectors_[static_cast<std::size_t>(user)];
    const CVector sg = s * g;
    const double norm = sg.norm();
    if (norm > 1e-12)
        s.noalias() -= (sg / norm) * (sg / norm).adjoint();

    composite_.conservativeResize(i + 1, Eigen::NoChange);
    composite_.row(i) = g.adjoint() * h_user;
    lower_ = composite_ * aux_precoders_;
}

AllocationState update_state(AllocationState state, int user, const CVector &g, const CVector &q,
                             const ChannelMatrix &h_user)
{
    state.append(user, g, q, h_user);
    return state;
}

} // namespace mmhp
