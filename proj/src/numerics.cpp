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

#include "mmhp/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace mmhp
{

namespace
{

std::string describe_condition(double estimate, double limit)
{
    std::ostringstream os;
    os << "condition number estimate " << estimate << " exceeds limit " << limit;
    return os.str();
}

// Rotates (u, v) jointly so that the largest-modulus entry of u is real and nonnegative.
void fix_phase(CVector &u, CVector &v)
{
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
    {
        const double m = std::abs(u[i]);
        if (m > best)
        {
            best = m;
            pivot = i;
        }
    }
    if (best <= 0.0)
        return;
    const cplx rot = std::conj(u[pivot]) / best;
    u *= rot;
    v *= rot;
    u[pivot] = cplx(std::abs(u[pivot]), 0.0);
}

double one_norm(const CMatrix &a)
{
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

IllConditionedError::IllConditionedError(double estimate, double limit)
    : NumericalError(describe_condition(estimate, limit)), estimate_(estimate)
{
}

SingularTriple max_singular_triple(const CMatrix &a)
{
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("max_singular_triple: empty matrix");
    if (!a.allFinite())
        throw NumericalError("max_singular_triple: non-finite input");

    SingularTriple out;
    const bool wide = a.rows() <= a.cols();
    const CMatrix gram = wide ? CMatrix(a * a.adjoint()) : CMatrix(a.adjoint() * a);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    if (eig.info() != Eigen::Success)
        throw ConvergenceError("max_singular_triple: eigensolver did not converge");

    // Eigenvalues are sorted ascending.
    const Eigen::Index top = gram.rows() - 1;
    if (wide)
    {
        out.u = eig.eigenvectors().col(top);
        out.v = a.adjoint() * out.u;
        out.sigma = out.v.norm();
    }
    else
    {
        out.v = eig.eigenvectors().col(top);
        out.u = a * out.v;
        out.sigma = out.u.norm();
    }

    if (!(out.sigma > 0.0))
    {
        out.sigma = 0.0;
        out.u = CVector::Unit(a.rows(), 0);
        out.v = CVector::Unit(a.cols(), 0);
        return out;
    }

    if (wide)
        out.v /= out.sigma;
    else
        out.u /= out.sigma;
    fix_phase(out.u, out.v);
    return out;
}

CMatrix invert_lower_triangular(const CMatrix &l, double cond_limit)
{
    if (l.rows() != l.cols())
        throw std::invalid_argument("invert_lower_triangular: matrix is not square");
    const Eigen::Index n = l.rows();
    if (n == 0)
        return CMatrix(0, 0);

    const double max_diag = l.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (!(std::abs(l(i, i)) >= 1e-12 * max_diag) || max_diag == 0.0)
            throw SingularMatrixError("invert_lower_triangular: zero or near-zero diagonal entry");
    }

    CMatrix inv = CMatrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col)
    {
        inv(col, col) = 1.0 / l(col, col);
        for (Eigen::Index row = col + 1; row < n; ++row)
        {
            cplx acc = 0.0;
            for (Eigen::Index k = col; k < row; ++k)
                acc += l(row, k) * inv(k, col);
            inv(row, col) = -acc / l(row, row);
        }
    }

    const double cond = one_norm(l.triangularView<Eigen::Lower>().toDenseMatrix()) * one_norm(inv);
    if (!std::isfinite(cond) || cond > cond_limit)
        throw IllConditionedError(cond, cond_limit);
    return inv;
}

double condition_number(const CMatrix &a)
{
    if (a.size() == 0)
        return 1.0;
    const Eigen::JacobiSVD<CMatrix> svd(a);
    const RVector &s = svd.singularValues();
    const double smin = s[s.size() - 1];
    if (!(smin > 0.0))
        return std::numeric_limits<double>::infinity();
    return s[0] / smin;
}

CMatrix guarded_inverse(const CMatrix &a, double cond_limit)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("guarded_inverse: matrix is not square");
    if (a.rows() == 0)
        return CMatrix(0, 0);
    const double cond = condition_number(a);
    if (!std::isfinite(cond) || cond > cond_limit)
        throw IllConditionedError(cond, cond_limit);
    return a.fullPivLu().inverse();
}

double log2_det_hpd(const CMatrix &a)
{
    const Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw SingularMatrixError("log2_det_hpd: matrix is not positive definite");
    double acc = 0.0;
    const CMatrix &lf = llt.matrixLLT();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        acc += std::log2(lf(i, i).real());
    return 2.0 * acc;
}

} // namespace mmhp
