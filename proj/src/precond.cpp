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

#include "lrpcg/precond.hpp"

#include <cmath>

#include "lrpcg/linalg.hpp"

namespace lrpcg {

LowRankPreconditioner::LowRankPreconditioner(CMatrix u, std::vector<double> lambda, double sigma2)
    : u_(std::move(u)), lambda_(std::move(lambda)), sigma2_(sigma2) {
    if (u_.cols() != lambda_.size())
        throw DimensionError("LowRankPreconditioner: basis " + shape_string(u_) + " vs " +
                             std::to_string(lambda_.size()) + " eigenvalues");
    if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_))
        throw InvalidSpectrum("LowRankPreconditioner: sigma2 must be positive and finite");
    d_.reserve(lambda_.size());
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
        if (!(lambda_[k] > 0.0))
            throw InvalidSpectrum("LowRankPreconditioner: eigenvalue " + std::to_string(k) + " is not positive (" +
                                  std::to_string(lambda_[k]) + ")");
        d_.push_back(1.0 / sigma2_ - 1.0 / lambda_[k]);
    }
}

CMatrix LowRankPreconditioner::apply(const CMatrix& r, FlopCounter* fc) const {
    if (r.rows() != u_.rows())
        throw DimensionError("precond apply: block " + shape_string(r) + " vs basis " + shape_string(u_));
    const double inv_s2 = 1.0 / sigma2_;
    CMatrix out = r;
    for (auto& z : out.data()) z *= inv_s2;
    if (rank() == 0) return out;

    FlopCounter local;
    CMatrix coeff = gemm(u_, r, Op::conj_trans, Op::none, &local);
    for (std::size_t k = 0; k < coeff.rows(); ++k)
        for (auto& z : coeff.row(k)) z *= d_[k];
    out -= gemm(u_, coeff, Op::none, Op::none, &local);
    if (fc) fc->merge(local, "precond.apply.");
    return out;
}

LowRankPreconditioner build_preconditioner(const SystemMatrix& q, std::size_t rank, std::size_t power_iters,
                                           std::uint64_t seed, FlopCounter* fc) {
    FlopCounter local;
    EVDResult evd = rcevd(q.matrix(), rank, power_iters, seed, &local);
    if (fc) fc->merge(local, "precond.build.");
    return LowRankPreconditioner(std::move(evd.u), std::move(evd.lambda), q.sigma2());
}

}  // namespace lrpcg
