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

#include <string_view>

#include "lrpcg/cmatrix.hpp"

namespace lrpcg {

enum class Domain { antenna, beamspace };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view s);

// Hermitian positive definite system matrix I + sum_i alpha_i R_i, or its
// beamspace image, with its mean spectral scale Re(tr Q)/N cached.
class SystemMatrix {
public:
    SystemMatrix() = default;
    // Validates squareness and Hermitian symmetry (1e-12 relative).
    explicit SystemMatrix(CMatrix q, Domain domain = Domain::antenna);

    const CMatrix& matrix() const noexcept { return q_; }
    double sigma2() const noexcept { return sigma2_; }
    Domain domain() const noexcept { return domain_; }
    std::size_t dim() const noexcept { return q_.rows(); }

private:
    CMatrix q_;
    double sigma2_ = 0.0;
    Domain domain_ = Domain::antenna;
};

}  // namespace lrpcg
