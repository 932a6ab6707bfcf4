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
#include "lrpcg/system_matrix.hpp"

namespace lrpcg {

// How the unitary similarity is evaluated. `dense` multiplies by the
// materialized F and serves as the reference; `fft` runs batched 2-D FFTs.
enum class TransformMethod { dense, fft };

/**
 * Separable DFT beamspace operator for a T x T planar array (N = T^2).
 * Antenna index a*T + b refers to element (a, b); F = F_x (x) F_y with
 * F_x[j][k] = exp(-2 pi i j k / T) / sqrt(T).
 */
class BeamspaceOperator {
public:
    explicit BeamspaceOperator(std::size_t side);

    std::size_t side() const noexcept { return side_; }
    std::size_t dim() const noexcept { return side_ * side_; }
    const CMatrix& f() const noexcept { return f_; }
    const CMatrix& f_x() const noexcept { return f_x_; }
    const CMatrix& f_y() const noexcept { return f_y_; }

private:
    std::size_t side_;
    CMatrix f_x_, f_y_, f_;
};

BeamspaceOperator build_operator(std::size_t side);

/// Kronecker product A (x) B.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Q_b = F Q F^H, re-symmetrized. Throws DimensionError on size mismatch.
SystemMatrix to_beamspace(const BeamspaceOperator& op, const SystemMatrix& q,
                          TransformMethod method = TransformMethod::fft, FlopCounter* fc = nullptr);

/// F X F^H for an arbitrary N x N block.
CMatrix to_beamspace(const BeamspaceOperator& op, const CMatrix& x, TransformMethod method = TransformMethod::fft,
                     FlopCounter* fc = nullptr);

/// F^H X_b F, the adjoint map back to the antenna domain.
CMatrix from_beamspace(const BeamspaceOperator& op, const CMatrix& xb, TransformMethod method = TransformMethod::fft,
                       FlopCounter* fc = nullptr);

/// Fraction of entries with |a_ij| < threshold * max |a_ij|. Reporting
/// only; nothing in the solver thresholds. A zero matrix gives 1.
double sparsity_ratio(const CMatrix& a, double threshold = 0.005);

}  // namespace lrpcg
