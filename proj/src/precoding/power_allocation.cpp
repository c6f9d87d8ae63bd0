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
#include <numeric>
#include <stdexcept>

namespace mmhp
{

double PowerAllocation::sum_rate() const
{
    double rate = 0.0;
    for (Eigen::Index j = 0; j < gains.size(); ++j)
        rate += std::log2(1.0 + powers[j] * gains[j] * gains[j]);
    return rate;
}

PowerAllocation waterfill(std::span<const double> gains, double budget)
{
    if (gains.empty())
        throw std::invalid_argument("waterfill: no subchannels");
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw std::invalid_argument("waterfill: power budget must be positive");

    const std::size_t n = gains.size();
    std::vector<double> floor_level(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        if (!(gains[j] > 0.0) || !std::isfinite(gains[j]))
            throw std::invalid_argument("waterfill: subchannel gains must be positive and finite");
        floor_level[j] = 1.0 / (gains[j] * gains[j]);
    }

    // Strongest subchannels (lowest floor) first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return floor_level[a] < floor_level[b]; });

    double prefix = 0.0;
    std::vector<double> prefix_sums(n);
    for (std::size_t m = 0; m < n; ++m)
    {
        prefix += floor_level[order[m]];
        prefix_sums[m] = prefix;
    }

    // Largest active set whose weakest member stays below the water level.
    std::size_t active = n;
    double level = 0.0;
    for (; active >= 1; --active)
    {
        level = (budget + prefix_sums[active - 1]) / static_cast<double>(active);
        if (level > floor_level[order[active - 1]])
            break;
    }

    PowerAllocation out;
    out.budget = budget;
    out.gains = RVector::Map(gains.data(), static_cast<Eigen::Index>(n));
    out.powers = RVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < active; ++m)
    {
        const std::size_t j = order[m];
        out.powers[static_cast<Eigen::Index>(j)] = std::max(level - floor_level[j], 0.0);
    }
    return out;
}

PowerAllocation waterfill(const RVector &gains, double budget)
{
    return waterfill(std::span<const double>(gains.data(), static_cast<std::size_t>(gains.size())), budget);
}

} // namespace mmhp
