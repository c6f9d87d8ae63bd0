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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmhp/channel.hpp"
#include "test_util.hpp"

#include <Eigen/SVD>

#include <numbers>

using namespace mmhp;
using mmhp::test::max_abs;

constexpr double pi = std::numbers::pi;

TEST_CASE("array geometry validation")
{
    CHECK(ArrayGeometry(8, 8).size() == 64);
    CHECK_THROWS_AS(ArrayGeometry(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(ArrayGeometry(2, -1), std::invalid_argument);
}

TEST_CASE("response vector examples")
{
    const CVector a = upa_response(0.0, pi / 2, ArrayGeometry(2, 2));
    REQUIRE(a.size() == 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(a(i) - cplx(0.5, 0.0)) < 1e-15);

    const CVector one = upa_response(1.234, -0.4, ArrayGeometry(1, 1));
    REQUIRE(one.size() == 1);
    CHECK(one(0) == cplx(1.0, 0.0));

    const CVector b = upa_response(pi / 2, pi / 2, ArrayGeometry(2, 1));
    CHECK(std::abs(b(0) - cplx(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK(std::abs(b(1) - cplx(-1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
}

TEST_CASE("response vector ordering and norm")
{
    const ArrayGeometry g(3, 4);
    const double phi = 0.8, theta = -1.1;
    const CVector a = upa_response(phi, theta, g);
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 4; ++n)
        {
            const cplx expected =
                std::exp(cplx(0.0, pi * (m * std::sin(phi) * std::sin(theta) + n * std::cos(theta)))) / std::sqrt(12.0);
            CHECK(std::abs(a(m * 4 + n) - expected) < 1e-14);
        }

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 100; ++i)
        CHECK(upa_response(u(rng), u(rng), ArrayGeometry(8, 8)).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single path channel is rank one with the expected singular value")
{
    const ArrayGeometry bs(8, 8), ms(4, 1);
    PathSet ps;
    ps.paths.push_back(Path{cplx(1.0, 0.0), 0.3, 0.2, 1.0, -0.5});
    const ChannelMatrix h = synthesize_channel(ps, bs, ms);
    REQUIRE(h.rows() == 4);
    REQUIRE(h.cols() == 64);
    const Eigen::JacobiSVD<CMatrix> svd(h);
    CHECK(svd.singularValues()(0) == doctest::Approx(std::sqrt(64.0 * 4.0)).epsilon(1e-12));
    CHECK(svd.singularValues()(1) < 1e-9);
}

TEST_CASE("zero-gain path and linearity in the gains")
{
    const ArrayGeometry bs(4, 4), ms(2, 1);
    const Path p1{cplx(0.7, -0.2), 0.3, 0.2, 1.0, -0.5};
    Path p2{cplx(0.0, 0.0), 2.0, -1.0, 0.1, 0.9};

    PathSet single{0, {p1}};
    PathSet padded{0, {p1, p2}};
    const ChannelMatrix h1 = synthesize_channel(single, bs, ms);
    const ChannelMatrix h2 = synthesize_channel(padded, bs, ms);
    CHECK(max_abs(h2 - h1 * std::sqrt(0.5)) < 1e-14);

    p2.gain = cplx(0.4, 0.3);
    PathSet a{0, {p1, p2}};
    Path p2x = p2;
    p2x.gain *= 2.0;
    PathSet b{0, {p1, p2x}};
    const ChannelMatrix ha = synthesize_channel(a, bs, ms);
    const ChannelMatrix hb = synthesize_channel(b, bs, ms);
    const CMatrix term = std::sqrt(32.0 / 2.0) * p2.gain * upa_response(p2.aoa_azimuth, p2.aoa_elevation, ms) *
                         upa_response(p2.aod_azimuth, p2.aod_elevation, bs).adjoint();
    CHECK(max_abs((hb - ha) - term) < 1e-13);

    CHECK_THROWS_AS(synthesize_channel(PathSet{}, bs, ms), std::invalid_argument);
}

TEST_CASE("rank never exceeds the number of paths")
{
    const ArrayGeometry bs(8, 8), ms(4, 4);
    for (int run = 0; run < 100; ++run)
    {
        const int paths = 1 + run % 3;
        const auto scenario = sample_scenario(derive_stream_seed(99, run), 1, paths);
        const ChannelMatrix h = synthesize_channel(scenario.front(), bs, ms);
        const Eigen::JacobiSVD<CMatrix> svd(h);
        const RVector &s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            rank += s(i) > 1e-9 * s(0) ? 1 : 0;
        CHECK(rank <= paths);
    }
}

TEST_CASE("scenario sampling shape and determinism")
{
    const auto s1 = sample_scenario(7, 8, 3);
    const auto s2 = sample_scenario(7, 8, 3);
    REQUIRE(s1.size() == 8);
    int total = 0;
    for (std::size_t k = 0; k < s1.size(); ++k)
    {
        CHECK(s1[k].user == static_cast<int>(k));
        CHECK(s1[k].paths.size() == 3);
        total += static_cast<int>(s1[k].paths.size());
        for (std::size_t l = 0; l < 3; ++l)
        {
            const Path &a = s1[k].paths[l];
            const Path &b = s2[k].paths[l];
            CHECK(a.gain == b.gain);
            CHECK(a.aod_azimuth == b.aod_azimuth);
            CHECK(a.aod_elevation == b.aod_elevation);
            CHECK(a.aoa_azimuth == b.aoa_azimuth);
            CHECK(a.aoa_elevation == b.aoa_elevation);
            CHECK(a.aod_azimuth >= 0.0);
            CHECK(a.aod_azimuth < 2 * pi);
            CHECK(std::abs(a.aoa_elevation) <= pi / 2);
        }
    }
    CHECK(total == 24);

    const ArrayGeometry bs(8, 8), ms(1, 1);
    const auto h1 = synthesize_channels(s1, bs, ms);
    const auto h2 = synthesize_channels(s2, bs, ms);
    for (std::size_t k = 0; k < h1.size(); ++k)
        CHECK(h1[k] == h2[k]);

    CHECK(sample_scenario(8, 8, 3).front().paths.front().gain != s1.front().paths.front().gain);
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
    CHECK_THROWS_AS(sample_scenario(7, 0, 3), std::invalid_argument);
}

TEST_CASE("Monte-Carlo channel energy and angle statistics")
{
    const ArrayGeometry bs(8, 8), ms(1, 1);
    double energy = 0.0;
    int draws = 0;
    for (int run = 0; run < 1250; ++run)
    {
        const auto scenario = sample_scenario(derive_stream_seed(7, run), 8, 3);
        for (const ChannelMatrix &h : synthesize_channels(scenario, bs, ms))
        {
            energy += h.squaredNorm();
            ++draws;
        }
    }
    CHECK(draws == 10000);
    CHECK(energy / draws == doctest::Approx(64.0).epsilon(0.05));

    // mean elevation over 1e5 scenarios, in degrees
    Rng rng(7);
    double sum = 0.0;
    long count = 0;
    for (int s = 0; s < 100000; ++s)
        for (const PathSet &ps : sample_scenario(rng, 8, 3))
            for (const Path &p : ps.paths)
            {
                sum += p.aod_elevation + p.aoa_elevation;
                count += 2;
            }
    CHECK(std::abs(sum / count * 180.0 / pi) < 1.0);
}
