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

#include "mmhp/numerics.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

using namespace mmhp;
using mmhp::test::max_abs;
using mmhp::test::random_matrix;

TEST_CASE("dominant triple of simple matrices")
{
    SingularTriple t = max_singular_triple(CMatrix::Identity(2, 2));
    CHECK(t.sigma == doctest::Approx(1.0).epsilon(1e-14));

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    t = max_singular_triple(d);
    CHECK(t.sigma == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(t.u(0)) == doctest::Approx(1.0));
    CHECK(std::abs(t.v(0)) == doctest::Approx(1.0));
    CHECK(std::abs(t.u(1)) < 1e-12);
}

TEST_CASE("dominant triple against a full eigendecomposition")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::Index rows = 1 + trial % 4;
        const Eigen::Index cols = 1 + (trial * 7) % 9;
        const CMatrix a = random_matrix(rng, rows, cols);
        const SingularTriple t = max_singular_triple(a);

        Eigen::SelfAdjointEigenSolver<CMatrix> oracle(a * a.adjoint());
        CHECK(t.sigma * t.sigma == doctest::Approx(oracle.eigenvalues().maxCoeff()).epsilon(1e-8));
        CHECK(std::abs((t.u.adjoint() * a * t.v)(0, 0) - cplx(t.sigma, 0.0)) < 1e-9 * std::max(1.0, t.sigma));
        CHECK(t.u.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_singular_triple(CMatrix(a.adjoint())).sigma == doctest::Approx(t.sigma).epsilon(1e-10));
    }
}

TEST_CASE("dominant triple is deterministic and phase-fixed")
{
    std::mt19937_64 rng(5);
    const CMatrix a = random_matrix(rng, 3, 4);
    const SingularTriple t1 = max_singular_triple(a);
    const SingularTriple t2 = max_singular_triple(a);
    CHECK(t1.sigma == t2.sigma);
    CHECK(t1.u == t2.u);
    CHECK(t1.v == t2.v);

    Eigen::Index arg = 0;
    t1.u.cwiseAbs().maxCoeff(&arg);
    CHECK(t1.u(arg).imag() == 0.0);
    CHECK(t1.u(arg).real() >= 0.0);

    // a global phase on the input does not change u
    const SingularTriple t3 = max_singular_triple(CMatrix(a * std::polar(1.0, 0.7)));
    CHECK(max_abs(t3.u - t1.u) < 1e-10);
}

TEST_CASE("dominant triple of the zero matrix")
{
    const SingularTriple t = max_singular_triple(CMatrix::Zero(2, 3));
    CHECK(t.sigma == 0.0);
    CHECK(t.u.norm() == doctest::Approx(1.0));
    CHECK(t.v.norm() == doctest::Approx(1.0));
}

TEST_CASE("lower-triangular inverse")
{
    CHECK(max_abs(invert_lower_triangular(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)) == 0.0);

    CMatrix l(2, 2);
    l << 2.0, 0.0, 1.0, 1.0;
    CMatrix expected(2, 2);
    expected << 0.5, 0.0, -0.5, 1.0;
    CHECK(max_abs(invert_lower_triangular(l) - expected) < 1e-15);

    std::mt19937_64 rng(3);
    CMatrix r = random_matrix(rng, 8, 8).triangularView<Eigen::Lower>();
    for (Eigen::Index i = 0; i < 8; ++i)
        r(i, i) += 4.0;
    r.triangularView<Eigen::StrictlyUpper>().setConstant(cplx(9.0, 9.0)); // never read
    const CMatrix inv = invert_lower_triangular(r);
    const CMatrix lower = r.triangularView<Eigen::Lower>();
    CHECK(max_abs(lower * inv - CMatrix::Identity(8, 8)) < 1e-9);
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = i + 1; j < 8; ++j)
            CHECK(inv(i, j) == cplx(0.0, 0.0));
}

TEST_CASE("lower-triangular inverse rejects singular and ill-conditioned input")
{
    CMatrix l = CMatrix::Identity(3, 3);
    l(2, 2) = 0.0;
    CHECK_THROWS_AS(invert_lower_triangular(l), SingularMatrixError);

    l(2, 2) = 1e-10;
    CHECK_THROWS_AS(invert_lower_triangular(l), IllConditionedError);
    CHECK_NOTHROW(invert_lower_triangular(l, 1e12));
    CHECK_THROWS_AS(invert_lower_triangular(CMatrix::Identity(2, 3)), std::invalid_argument);
}

TEST_CASE("guarded inverse")
{
    CHECK(max_abs(guarded_inverse(CMatrix::Identity(4, 4)) - CMatrix::Identity(4, 4)) < 1e-15);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = 0.5;
    expected(1, 1) = 0.25;
    CHECK(max_abs(guarded_inverse(d) - expected) < 1e-15);

    // cond about 1e3 from prescribed singular values
    std::mt19937_64 rng(17);
    const Eigen::HouseholderQR<CMatrix> qu(random_matrix(rng, 8, 8));
    const Eigen::HouseholderQR<CMatrix> qv(random_matrix(rng, 8, 8));
    const CMatrix u = qu.householderQ();
    const CMatrix v = qv.householderQ();
    RVector s = RVector::LinSpaced(8, 1.0, 1e-3);
    const CMatrix a = u * s.cast<cplx>().asDiagonal() * v.adjoint();
    CHECK(condition_number(a) == doctest::Approx(1e3).epsilon(1e-8));
    CHECK(max_abs(a * guarded_inverse(a) - CMatrix::Identity(8, 8)) < 1e-8);

    s(7) = 1e-10;
    const CMatrix bad = u * s.cast<cplx>().asDiagonal() * v.adjoint();
    CHECK_THROWS_AS(guarded_inverse(bad), IllConditionedError);
    try
    {
        guarded_inverse(bad);
    }
    catch (const IllConditionedError &e)
    {
        CHECK(e.condition_estimate() > default_cond_limit);
    }
    CHECK_THROWS_AS(guarded_inverse(CMatrix::Zero(2, 2)), IllConditionedError);
}

TEST_CASE("log-determinant of a Hermitian positive definite matrix")
{
    std::mt19937_64 rng(23);
    const CMatrix b = random_matrix(rng, 5, 5);
    const CMatrix a = CMatrix::Identity(5, 5) + b * b.adjoint();
    const double oracle = std::log2(a.determinant().real());
    CHECK(log2_det_hpd(a) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK_THROWS_AS(log2_det_hpd(-CMatrix::Identity(2, 2)), SingularMatrixError);
}
