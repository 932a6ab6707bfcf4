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

#include "lrpcg/cmatrix.hpp"

namespace lrpcg {

struct RankDeficiency : Error {
    using Error::Error;
};

struct QRCResult {
    CMatrix q;       // N x q, orthonormal columns
    CMatrix r;       // q x q upper triangular, A = Q R
    CMatrix l;       // first-pass Cholesky factor
    CMatrix l_bar;   // second-pass Cholesky factor
    double shift_applied = 0.0;
    // ||Q1^H Q1 - I||_F after the first pass, kept for diagnostics.
    double first_pass_orthogonality = 0.0;
};

/**
 * CholeskyQR2 of a tall-and-skinny N x q matrix.
 *
 * Two rounds of W = Q^H Q, W = L L^H, Q <- Q L^{-H}. The triangular factor
 * is assembled as R = L_bar^H L^H so that Q R reproduces the input.
 *
 * If a Cholesky breaks down, it is retried once with W shifted by
 * 1e-12 * trace(W) / q; a second breakdown throws RankDeficiency.
 */
QRCResult qrc_factor(const CMatrix& a, FlopCounter* fc = nullptr);

}  // namespace lrpcg
