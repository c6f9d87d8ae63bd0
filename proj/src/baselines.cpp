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

#include "mmhp/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmhp
{

namespace
{

// Eigenmodes of a wide matrix: singular values above `tol * sigma_max`, with unit left/right vectors.
struct Modes
{
    std::vector<double> sigma;
    std::vector<CVector> left;
    std::vector<CVector> right;
};

Modes eigenmodes(const CMatrix &a, double tol)
{
    Modes m;
    if (a.rows() == 0)
        return m;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(CMatrix(a * a.adjoint()));
    if (eig.info() != Eigen::Success)
        throw ConvergenceError("eigenmodes: eigensolver did not converge");
    const RVector &ev = eig.eigenvalues();
    const double top = std::max(ev[ev.size() - 1], 0.0);
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i)
    {
        const CVector u = eig.eigenvectors().col(i);
        CVector v = a.adjoint() * u;
        const double s = v.norm();
        if (!(s > 0.0) || s * s <= tol * tol * top || s < 1e-12)
            break;
        m.sigma.push_back(s);
        m.left.push_back(u);
        m.right.push_back(v / s);
    }
    return m;
}

// Each selected user's channel restricted to the null space of the other selected users.
std::vector<Modes> bd_modes(const std::vector<ChannelMatrix> &channels, const std::vector<int> &subset)
{
    const Eigen::Index n_bs = channels.front().cols();
    const Eigen::Index n_ms = channels.front().rows();
    std::vector<Modes> out;
    for (int k : subset)
    {
        CMatrix others((static_cast<Eigen::Index>(subset.size()) - 1) * n_ms, n_bs);
        Eigen::Index row = 0;
        for (int j : subset)
        {
            if (j == k)
                continue;
            others.middleRows(row, n_ms) = channels[static_cast<std::size_t>(j)];
            row += n_ms;
        }
        if (others.rows() + n_ms > n_bs)
            throw std::invalid_argument("run_bd: null space too small for the selected users");

        const ChannelMatrix &h = channels[static_cast<std::size_t>(k)];
        CMatrix effective = h;
        if (others.rows() > 0)
        {
            const Modes row_space = eigenmodes(others, 1e-10);
            for (const CVector &v : row_space.right)
                effective -= (effective * v) * v.adjoint();
        }
        out.push_back(eigenmodes(effective, 1e-10));
    }
    return out;
}

double subset_rate(const std::vector<Modes> &modes, double budget)
{
    std::vector<double> gains;
    for (const Modes &m : modes)
        gains.insert(gains.end(), m.sigma.begin(), m.sigma.end());
    if (gains.empty())
        return 0.0;
    return waterfill(gains, budget).sum_rate();
}

} // namespace

BeamsteeringCodebooks build_path_codebooks(const std::vector<PathSet> &path_sets, const ArrayGeometry &bs,
                                           const ArrayGeometry &ms)
{
    BeamsteeringCodebooks cb;
    for (const PathSet &ps : path_sets)
    {
        if (ps.paths.empty())
            throw std::invalid_argument("build_path_codebooks: empty path set");
        std::vector<CVector> b, m;
        for (const Path &p : ps.paths)
        {
            b.push_back(upa_response(p.aod_azimuth, p.aod_elevation, bs));
            m.push_back(upa_response(p.aoa_azimuth, p.aoa_elevation, ms));
        }
        cb.bs.push_back(std::move(b));
        cb.ms.push_back(std::move(m));
    }
    return cb;
}

PrecodingSolution run_2smuhpa(const std::vector<ChannelMatrix> &channels, const BeamsteeringCodebooks &codebooks,
                              double budget, PowerMode mode, double cond_limit)
{
    const auto num_users = static_cast<Eigen::Index>(channels.size());
    if (num_users == 0 || codebooks.bs.size() != channels.size() || codebooks.ms.size() != channels.size())
        throw std::invalid_argument("run_2smuhpa: channel and codebook counts differ");
    if (!(budget > 0.0))
        throw std::invalid_argument("run_2smuhpa: power budget must be positive");

    const Eigen::Index n_bs = channels.front().cols();
    const Eigen::Index n_ms = channels.front().rows();

    // Stage 1: best beam pair per user.
    CMatrix analog(n_bs, num_users);
    CMatrix equalizers(n_ms, num_users);
    for (Eigen::Index k = 0; k < num_users; ++k)
    {
        const auto uk = static_cast<std::size_t>(k);
        const ChannelMatrix &h = channels[uk];
        double best = -1.0;
        for (const CVector &g : codebooks.ms[uk])
        {
            const Eigen::RowVectorXcd gh = g.adjoint() * h;
            for (const CVector &p : codebooks.bs[uk])
            {
                const double value = std::abs(gh.dot(p.conjugate()));
                if (value > best)
                {
                    best = value;
                    analog.col(k) = p;
                    equalizers.col(k) = g;
                }
            }
        }
    }

    // Stage 2: zero-force the effective K x K channel.
    CMatrix effective(num_users, num_users);
    for (Eigen::Index k = 0; k < num_users; ++k)
        effective.row(k) = equalizers.col(k).adjoint() * channels[static_cast<std::size_t>(k)] * analog;

    const CMatrix inv = guarded_inverse(effective, cond_limit);
    const RVector gains = (analog * inv).colwise().norm().cwiseInverse().transpose();

    PowerAllocation power;
    if (mode == PowerMode::waterfilling)
    {
        power = waterfill(gains, budget);
    }
    else
    {
        power.gains = gains;
        power.powers = RVector::Constant(num_users, budget / static_cast<double>(num_users));
        power.budget = budget;
    }

    const RVector scale = gains.cwiseProduct(power.powers.cwiseSqrt());
    CMatrix digital = inv * scale.cast<cplx>().asDiagonal();

    PrecodingSolution sol;
    sol.stream_precoders = analog * digital;
    sol.stream_equalizers = equalizers;
    for (Eigen::Index k = 0; k < num_users; ++k)
    {
        sol.stream_users.push_back(static_cast<int>(k));
        sol.precoders.emplace_back(sol.stream_precoders.col(k));
        sol.equalizers.emplace_back(equalizers.col(k));
    }
    sol.power = std::move(power);
    sol.sum_rate = sol.power.sum_rate();
    sol.hybrid = HybridFactorization{analog, std::move(digital)};
    return sol;
}

BdResult run_bd(const std::vector<ChannelMatrix> &channels, double budget, int n_rf)
{
    if (channels.empty())
        throw std::invalid_argument("run_bd: no users");
    if (!(budget > 0.0))
        throw std::invalid_argument("run_bd: power budget must be positive");
    const int num_users = static_cast<int>(channels.size());
    const int n_ms = static_cast<int>(channels.front().rows());
    const int n_bs = static_cast<int>(channels.front().cols());
    if (n_rf < n_ms || n_rf % n_ms != 0)
        throw std::invalid_argument("run_bd: N_MS must divide N_RF");
    const int max_users = std::min(n_rf / n_ms, num_users);

    BdResult result;
    double best_rate = -1.0;
    std::vector<Modes> best_modes;

    // Subsets by size, then lexicographically; the first maximum wins.
    for (int size = 1; size <= max_users; ++size)
    {
        std::vector<int> subset(static_cast<std::size_t>(size));
        std::iota(subset.begin(), subset.end(), 0);
        while (true)
        {
            std::vector<Modes> modes = bd_modes(channels, subset);
            const double rate = subset_rate(modes, budget);
            ++result.subsets_evaluated;
            if (rate > best_rate)
            {
                best_rate = rate;
                result.users = subset;
                best_modes = std::move(modes);
            }

            int pos = size - 1;
            while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == num_users - size + pos)
                --pos;
            if (pos < 0)
                break;
            ++subset[static_cast<std::size_t>(pos)];
            for (int j = pos + 1; j < size; ++j)
                subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

    std::vector<double> gains;
    for (const Modes &m : best_modes)
        gains.insert(gains.end(), m.sigma.begin(), m.sigma.end());

    PrecodingSolution &sol = result.solution;
    sol.precoders.assign(static_cast<std::size_t>(num_users), CMatrix(n_bs, 0));
    sol.equalizers.assign(static_cast<std::size_t>(num_users), CMatrix(n_ms, 0));
    sol.stream_precoders.resize(n_bs, static_cast<Eigen::Index>(gains.size()));
    sol.stream_equalizers.resize(n_ms, static_cast<Eigen::Index>(gains.size()));
    if (gains.empty())
    {
        sol.power.budget = budget;
        return result;
    }
    sol.power = waterfill(gains, budget);

    Eigen::Index stream = 0;
    for (std::size_t s = 0; s < result.users.size(); ++s)
    {
        const Modes &m = best_modes[s];
        const auto k = static_cast<std::size_t>(result.users[s]);
        const auto count = static_cast<Eigen::Index>(m.sigma.size());
        sol.precoders[k].resize(n_bs, count);
        sol.equalizers[k].resize(n_ms, count);
        for (Eigen::Index j = 0; j < count; ++j, ++stream)
        {
            const CVector p = m.right[static_cast<std::size_t>(j)] * std::sqrt(sol.power.powers[stream]);
            sol.precoders[k].col(j) = p;
            sol.equalizers[k].col(j) = m.left[static_cast<std::size_t>(j)];
            sol.stream_precoders.col(stream) = p;
            sol.stream_equalizers.col(stream) = m.left[static_cast<std::size_t>(j)];
            sol.stream_users.push_back(static_cast<int>(k));
        }
    }
    sol.sum_rate = sol.power.sum_rate();
    return result;
}

CapacityResult dpc_sum_capacity(const std::vector<ChannelMatrix> &channels, double budget, double tol, int max_iters)
{
    if (channels.empty())
        throw std::invalid_argument("dpc_sum_capacity: no users");
    if (!(budget > 0.0))
        throw std::invalid_argument("dpc_sum_capacity: power budget must be positive");

    const std::size_t num_users = channels.size();
    const Eigen::Index n_bs = channels.front().cols();
    const double users = static_cast<double>(num_users);

    // H_k = U_k R_k with orthonormal U_k; the dual uplink only sees R_k.
    std::vector<CMatrix> reduced(num_users);
    std::vector<Eigen::Index> offset(num_users + 1, 0);
    for (std::size_t k = 0; k < num_users; ++k)
    {
        const Modes m = eigenmodes(channels[k], 1e-10);
        CMatrix r(static_cast<Eigen::Index>(m.sigma.size()), n_bs);
        for (std::size_t i = 0; i < m.sigma.size(); ++i)
            r.row(static_cast<Eigen::Index>(i)) = m.sigma[i] * m.right[i].adjoint();
        reduced[k] = std::move(r);
        offset[k + 1] = offset[k] + reduced[k].rows();
    }
    const Eigen::Index n_stack = offset[num_users];
    if (n_stack == 0)
    {
        CapacityResult zero;
        zero.converged = true;
        return zero;
    }
    auto dim = [&](std::size_t k) { return reduced[k].rows(); };

    // Dual uplink covariances, trace P/K each to start.
    std::vector<CMatrix> cov(num_users);
    for (std::size_t k = 0; k < num_users; ++k)
        cov[k] = CMatrix::Identity(dim(k), dim(k)) * (dim(k) > 0 ? budget / (users * dim(k)) : 0.0);

    // With fewer stacked dimensions than BS antennas everything is done on the Gram matrix
    // C = Rs Rs^H of the stacked reduced channels, otherwise on I + sum_k R_k^H Q_k R_k.
    const bool gram_domain = n_stack < n_bs;
    CMatrix gram;
    if (gram_domain)
    {
        CMatrix stacked(n_stack, n_bs);
        for (std::size_t k = 0; k < num_users; ++k)
            stacked.middleRows(offset[k], dim(k)) = reduced[k];
        gram = stacked * stacked.adjoint();
    }

    // Block-diagonal square root of the uplink covariances, with block `skip` zeroed.
    auto cov_sqrt = [&](const std::vector<CMatrix> &q, std::size_t skip) {
        CMatrix e = CMatrix::Zero(n_stack, n_stack);
        for (std::size_t k = 0; k < num_users; ++k)
        {
            if (k == skip || dim(k) == 0)
                continue;
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(q[k]);
            const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            e.block(offset[k], offset[k], dim(k), dim(k)) =
                eig.eigenvectors() * root.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
        }
        return e;
    };

    auto uplink_sum = [&](const std::vector<CMatrix> &q) {
        CMatrix z = CMatrix::Identity(n_bs, n_bs);
        for (std::size_t k = 0; k < num_users; ++k)
            z.noalias() += reduced[k].adjoint() * q[k] * reduced[k];
        return z;
    };

    auto sum_rate = [&](const std::vector<CMatrix> &q) {
        if (!gram_domain)
            return log2_det_hpd(uplink_sum(q));
        const CMatrix e = cov_sqrt(q, num_users);
        return log2_det_hpd(CMatrix(CMatrix::Identity(n_stack, n_stack) + e * gram * e));
    };

    // R_k (I + sum_{j != k} R_j^H Q_j R_j)^{-1} R_k^H for every user.
    auto effective = [&](const std::vector<CMatrix> &q) {
        std::vector<CMatrix> out(num_users);
        const CMatrix total = gram_domain ? CMatrix() : uplink_sum(q);
        for (std::size_t k = 0; k < num_users; ++k)
        {
            if (dim(k) == 0)
                continue;
            if (gram_domain)
            {
                const CMatrix e = cov_sqrt(q, k);
                const CMatrix m = CMatrix::Identity(n_stack, n_stack) + e * gram * e;
                const CMatrix b = e * gram.middleCols(offset[k], dim(k));
                out[k] = gram.block(offset[k], offset[k], dim(k), dim(k)) -
                         b.adjoint() * Eigen::LLT<CMatrix>(m).solve(b);
            }
            else
            {
                const CMatrix &h = reduced[k];
                const CMatrix z = total - h.adjoint() * q[k] * h;
                out[k] = h * Eigen::LLT<CMatrix>(z).solve(CMatrix(h.adjoint()));
            }
        }
        return out;
    };

    CapacityResult out;
    double previous = sum_rate(cov);

    for (int iter = 1; iter <= max_iters; ++iter)
    {
        const std::vector<CMatrix> w = effective(cov);

        std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> eig(num_users);
        std::vector<double> gains;
        std::vector<std::pair<std::size_t, Eigen::Index>> owner;
        for (std::size_t k = 0; k < num_users; ++k)
        {
            if (dim(k) == 0)
                continue;
            eig[k].compute(CMatrix(0.5 * (w[k] + w[k].adjoint())));
            if (eig[k].info() != Eigen::Success)
                throw ConvergenceError("dpc_sum_capacity: eigensolver did not converge");
            const double floor = 1e-12 * reduced[k].squaredNorm();
            for (Eigen::Index i = 0; i < dim(k); ++i)
            {
                const double ev = eig[k].eigenvalues()[i];
                if (ev > floor)
                {
                    gains.push_back(std::sqrt(ev));
                    owner.emplace_back(k, i);
                }
            }
        }

        const PowerAllocation wf = waterfill(gains, budget);
        std::vector<RVector> loads(num_users);
        for (std::size_t k = 0; k < num_users; ++k)
            loads[k] = RVector::Zero(dim(k));
        for (std::size_t j = 0; j < gains.size(); ++j)
            loads[owner[j].first][owner[j].second] = wf.powers[static_cast<Eigen::Index>(j)];

        for (std::size_t k = 0; k < num_users; ++k)
        {
            if (dim(k) == 0)
                continue;
            const CMatrix &u = eig[k].eigenvectors();
            const CMatrix s = u * loads[k].cast<cplx>().asDiagonal() * u.adjoint();
            cov[k] = (1.0 / users) * s + ((users - 1.0) / users) * cov[k];
        }

        const double rate = sum_rate(cov);
        out.history.push_back(rate);
        out.iterations = iter;
        out.capacity = rate;
        if (std::abs(rate - previous) <= tol * std::max(std::abs(rate), 1e-300))
        {
            out.converged = true;
            break;
        }
        previous = rate;
    }
    return out;
}

} // namespace mmhp
