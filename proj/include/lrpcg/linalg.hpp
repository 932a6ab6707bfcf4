// SPDX-License-Identifier: Apache-2.0
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

#pragma once

/// @file linalg.hpp
/// Dense complex kernels shared by the solver stack. Every kernel that
/// accepts a FlopCounter records its complex multiply/add counts there;
/// passing nullptr disables counting.

#include <vector>

#include "lrpcg/cmatrix.hpp"

namespace lrpcg {

enum class Op { none, conj_trans };

/// op(A) * op(B). Adds m*n*k multiplies under kernel "gemm".
CMatrix gemm(const CMatrix& a, const CMatrix& b, Op op_a = Op::none, Op op_b = Op::none,
             FlopCounter* fc = nullptr);

/// A^H A for tall A (N x q). Only the upper triangle is computed and then
/// mirrored, so the count is N*q*(q+1)/2 under kernel "gram".
CMatrix gram(const CMatrix& a, FlopCounter* fc = nullptr);

/// Lower Cholesky factor L with W = L L^H and a real positive diagonal.
///
/// Throws NotPositiveDefinite when a pivot drops to or below
/// 1e-14 * trace(W) / n. No jitter is applied here; callers own recovery.
CMatrix cholesky(const CMatrix& w, FlopCounter* fc = nullptr);

/// Returns Z with Z * L^H = Y, i.e. Y L^{-H}. L is q x q lower triangular,
/// Y is N x q. Rows of Y are independent; sequential depth is q.
CMatrix trsm_right_upper_ct(const CMatrix& y, const CMatrix& l, FlopCounter* fc = nullptr);

/// Solves L X = B (forward substitution).
CMatrix trsm_lower(const CMatrix& l, const CMatrix& b, FlopCounter* fc = nullptr);

/// Solves L^H X = B (back substitution against the conjugate transpose).
CMatrix trsm_lower_ct(const CMatrix& l, const CMatrix& b, FlopCounter* fc = nullptr);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    CMatrix vectors;             // columns are eigenvectors
};

/// Hermitian eigendecomposition of any size (LAPACK zheev).
EigenDecomposition hermitian_evd(const CMatrix& b, FlopCounter* fc = nullptr);

/// Small projected eigenproblem (q <= 64). Same contract as hermitian_evd.
EigenDecomposition hermitian_evd_small(const CMatrix& b, FlopCounter* fc = nullptr);

/// Cyclic Jacobi eigensolver used as an independent oracle (N <= 1024).
/// Throws ConvergenceError if 30 sweeps do not suffice.
EigenDecomposition full_evd_oracle(const CMatrix& q, double tol = 1e-15);

/// Q^{-1} for Hermitian positive definite Q via Cholesky and two triangular solves.
CMatrix direct_inverse_oracle(const CMatrix& q, FlopCounter* fc = nullptr);

double fro_norm(const CMatrix& a);
cplx trace(const CMatrix& a);

/// ||A - A^H||_F / ||A||_F (0 for the zero matrix).
double hermitian_deviation(const CMatrix& a);

/// Throws ValidationError if A is not square or deviates from Hermitian by
/// more than rel_tol.
void require_hermitian(const CMatrix& a, double rel_tol, const char* who);

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

/// ||Q^H Q - I||_F.
double orthonormality_error(const CMatrix& q);

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns, computed through the sine so that
/// small angles keep full relative accuracy.
double max_principal_angle(const CMatrix& a, const CMatrix& b);

/// Spectral condition number from a descending eigenvalue list.
double condition_number(const std::vector<double>& descending_eigs);

}  // namespace lrpcg
