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

namespace lrpcg {

inline constexpr std::size_t kDefaultRank = 8;
inline constexpr std::size_t kDefaultPowerIters = 4;

struct EVDResult {
    CMatrix u;                   // N x q, orthonormal columns
    std::vector<double> lambda;  // descending
    std::size_t q = 0;
    std::size_t p = 0;
    std::uint64_t seed = 0;      // seed of the sketch that succeeded
};

/// N x q block of i.i.d. circular complex Gaussians (unit variance),
/// reproducible from `seed`.
CMatrix random_gaussian_block(std::size_t n, std::size_t q, std::uint64_t seed);

/// Randomized truncated EVD of a Hermitian matrix with p power iterations.
///
/// Each power step is re-orthogonalized with CholeskyQR2. When a QR step
/// reports rank deficiency the sketch is redrawn with seed+1, at most three
/// times. Eigenvalues within -1e-12 of zero are clamped to zero.
EVDResult rcevd(const CMatrix& a, std::size_t q = kDefaultRank, std::size_t p = kDefaultPowerIters,
                std::uint64_t seed = 0, FlopCounter* fc = nullptr);

}  // namespace lrpcg
