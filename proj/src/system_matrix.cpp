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

#include "lrpcg/system_matrix.hpp"

#include "lrpcg/linalg.hpp"

namespace lrpcg {

std::string_view to_string(Domain d) { return d == Domain::antenna ? "antenna" : "beamspace"; }

Domain parse_domain(std::string_view s) {
    if (s == "antenna") return Domain::antenna;
    if (s == "beamspace") return Domain::beamspace;
    throw ValidationError("unknown domain '" + std::string(s) + "' (expected antenna or beamspace)");
}

SystemMatrix::SystemMatrix(CMatrix q, Domain domain) : q_(std::move(q)), domain_(domain) {
    require_hermitian(q_, 1e-12, "SystemMatrix");
    if (q_.rows() == 0) throw ValidationError("SystemMatrix: empty matrix");
    sigma2_ = trace(q_).real() / static_cast<double>(q_.rows());
    if (!(sigma2_ > 0.0)) throw ValidationError("SystemMatrix: trace must be positive");
}

}  // namespace lrpcg
