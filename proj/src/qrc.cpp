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

#include "lrpcg/qrc.hpp"

#include <algorithm>

#include "lrpcg/linalg.hpp"

namespace lrpcg {

namespace {

CMatrix cholesky_with_retry(CMatrix w, double& shift_applied, FlopCounter* fc) {
    try {
        return cholesky(w, fc);
    } catch (const NotPositiveDefinite&) {
        const double shift = 1e-12 * trace(w).real() / static_cast<double>(w.rows());
        for (std::size_t i = 0; i < w.rows(); ++i) w(i, i) += shift;
        shift_applied = std::max(shift_applied, shift);
        try {
            return cholesky(w, fc);
        } catch (const NotPositiveDefinite& e) {
            throw RankDeficiency(std::string("qrc: Gram matrix is rank deficient after shifted retry; ") + e.what());
        }
    }
}

}  // namespace

QRCResult qrc_factor(const CMatrix& a, FlopCounter* fc) {
    const std::size_t n = a.rows(), q = a.cols();
    if (q == 0 || n < q) throw DimensionError("qrc_factor: need N >= q >= 1, got " + shape_string(a));

    QRCResult out;
    FlopCounter local;

    CMatrix w = gram(a, &local);
    out.l = cholesky_with_retry(std::move(w), out.shift_applied, &local);
    CMatrix q1 = trsm_right_upper_ct(a, out.l, &local);
    out.first_pass_orthogonality = orthonormality_error(q1);

    w = gram(q1, &local);
    out.l_bar = cholesky_with_retry(std::move(w), out.shift_applied, &local);
    out.q = trsm_right_upper_ct(q1, out.l_bar, &local);

    // R = L_bar^H L^H, product of two upper triangular factors.
    out.r = CMatrix(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i; j < q; ++j) {
            cplx s = 0.0;
            for (std::size_t k = i; k <= j; ++k) s += std::conj(out.l_bar(k, i)) * std::conj(out.l(j, k));
            out.r(i, j) = s;
        }

    if (fc) fc->merge(local, "qrc.");
    return out;
}

}  // namespace lrpcg
