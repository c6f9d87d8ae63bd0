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

#ifndef MMHP_NUMERICS_HPP
#define MMHP_NUMERICS_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace mmhp
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double default_cond_limit = 1e8;

// Base for every failure that originates in the linear-algebra kernel.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class IllConditionedError : public NumericalError
{
public:
    IllConditionedError(double estimate, double limit);
    double condition_estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class ConvergenceError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

/// Dominant singular value of a matrix together with its unit singular vectors,
/// so that `u^H A v == sigma`.
struct SingularTriple
{
    double sigma = 0.0;
    CVector u;
    CVector v;
};

/// Largest singular triple of `a`.
///
/// The decomposition runs on the smaller Gram matrix (`A A^H` or `A^H A`), which is at
/// most 16x16 for the array sizes used here. The phase of the pair is fixed by making the
/// largest-modulus entry of `u` real and nonnegative (first such entry on ties), so repeated
/// calls on the same input are bitwise identical. A zero matrix yields sigma = 0 with
/// canonical basis vectors.
SingularTriple max_singular_triple(const CMatrix &a);

/// Inverse of a lower-triangular matrix by forward substitution. Only the lower triangle of
/// `l` is read; the strictly upper part of the result is exactly zero.
/// Throws SingularMatrixError if a diagonal entry is below 1e-12 times the largest one, and
/// IllConditionedError if the 1-norm condition estimate exceeds `cond_limit`.
CMatrix invert_lower_triangular(const CMatrix &l, double cond_limit = default_cond_limit);

/// General square inverse guarded by the 2-norm condition number.
CMatrix guarded_inverse(const CMatrix &a, double cond_limit = default_cond_limit);

/// 2-norm condition number from the singular values (infinity for rank-deficient input).
double condition_number(const CMatrix &a);

/// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2_det_hpd(const CMatrix &a);

} // namespace mmhp

#endif
