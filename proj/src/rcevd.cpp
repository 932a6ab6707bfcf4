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

#include "lrpcg/rcevd.hpp"

#include <cmath>
#include <random>

#include "lrpcg/linalg.hpp"
#include "lrpcg/qrc.hpp"

namespace lrpcg {

CMatrix random_gaussian_block(std::size_t n, std::size_t q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix out(n, q);
    for (auto& z : out.data()) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = cplx(s * re, s * im);
    }
    return out;
}

namespace {

EVDResult rcevd_once(const CMatrix& a, std::size_t q, std::size_t p, std::uint64_t seed, FlopCounter& fc) {
    CMatrix basis = random_gaussian_block(a.rows(), q, seed);
    for (std::size_t j = 0; j < p; ++j) {
        CMatrix y = gemm(a, basis, Op::none, Op::none, &fc);
        basis = qrc_factor(y, &fc).q;
    }

    const CMatrix ab = gemm(a, basis, Op::none, Op::none, &fc);
    const CMatrix b = hermitian_part(gemm(basis, ab, Op::conj_trans, Op::none, &fc));
    auto small = hermitian_evd_small(b, &fc);

    EVDResult out;
    out.u = gemm(basis, small.vectors, Op::none, Op::none, &fc);
    out.lambda = std::move(small.values);
    for (auto& l : out.lambda)
        if (l < 0.0 && l >= -1e-12) l = 0.0;
    out.q = q;
    out.p = p;
    out.seed = seed;
    return out;
}

}  // namespace

EVDResult rcevd(const CMatrix& a, std::size_t q, std::size_t p, std::uint64_t seed, FlopCounter* fc) {
    if (!a.is_square()) throw DimensionError("rcevd: expected square matrix, got " + shape_string(a));
    require_hermitian(a, 1e-10, "rcevd");
    if (q < 1 || q > a.rows()) throw ValidationError("rcevd: rank q must lie in [1, N]");
    if (p < 1) throw ValidationError("rcevd: need at least one power iteration");

    for (int redraw = 0;; ++redraw) {
        FlopCounter local;
        try {
            EVDResult res = rcevd_once(a, q, p, seed + static_cast<std::uint64_t>(redraw), local);
            if (fc) fc->merge(local, "rcevd.");
            return res;
        } catch (const RankDeficiency& e) {
            if (redraw == 3) throw RankDeficiency(std::string("rcevd: sketch rank deficient after 3 redraws; ") + e.what());
        }
    }
}

}  // namespace lrpcg
