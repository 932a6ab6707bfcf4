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

#include <cstdint>
#include <vector>

#include "lrpcg/cmatrix.hpp"
#include "lrpcg/rcevd.hpp"
#include "lrpcg/system_matrix.hpp"

namespace lrpcg {

struct InvalidSpectrum : Error {
    using Error::Error;
};

/**
 * Inverse of the rank-q model  Q_hat = s2 I + U (Lambda - s2 I) U^H,
 * held in factored form. By Woodbury,
 *
 *     M = Q_hat^{-1} = s2^{-1} I - U D U^H,   D_k = 1/s2 - 1/lambda_k,
 *
 * and M is only ever applied to blocks, right to left.
 */
class LowRankPreconditioner {
public:
    LowRankPreconditioner() = default;
    // Throws InvalidSpectrum unless sigma2 > 0 and every lambda_k > 0.
    LowRankPreconditioner(CMatrix u, std::vector<double> lambda, double sigma2);

    const CMatrix& basis() const noexcept { return u_; }
    const std::vector<double>& lambda() const noexcept { return lambda_; }
    const std::vector<double>& d() const noexcept { return d_; }
    double sigma2() const noexcept { return sigma2_; }
    std::size_t rank() const noexcept { return lambda_.size(); }
    std::size_t dim() const noexcept { return u_.rows(); }

    /// s2^{-1} R - U (D .* (U^H R)). About 2 q N m complex multiplies for
    /// an N x m block, recorded under "precond.apply".
    CMatrix apply(const CMatrix& r, FlopCounter* fc = nullptr) const;

private:
    CMatrix u_;
    std::vector<double> lambda_;
    std::vector<double> d_;
    double sigma2_ = 1.0;
};

/// RC-EVD of Q followed by the Woodbury set-up; sigma2 = Re(tr Q)/N.
LowRankPreconditioner build_preconditioner(const SystemMatrix& q, std::size_t rank = kDefaultRank,
                                           std::size_t power_iters = kDefaultPowerIters, std::uint64_t seed = 0,
                                           FlopCounter* fc = nullptr);

}  // namespace lrpcg
