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

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "lrpcg/cmatrix.hpp"
#include "lrpcg/precond.hpp"
#include "lrpcg/system_matrix.hpp"

namespace lrpcg {

struct NumericalBreakdown : Error {
    NumericalBreakdown(std::size_t iteration, const std::string& what);
    std::size_t iteration;
};

struct CGConfig {
    std::size_t max_iters = 100;
    double epsilon = 1e-3;  // stop once ||Q X - I||_F / sqrt(N) < epsilon
    // The residual is always recomputed as I - Q X; the flag exists so
    // that configurations are explicit about it.
    bool recompute_residual = true;
    bool record_trajectory = true;
};

struct CGState {
    CMatrix x, r, z, p, s;
    std::vector<cplx> alpha, beta;
    std::vector<bool> frozen;
    std::size_t iter = 0;
    bool converged = false;
    std::vector<double> residual_history;  // one entry per iteration
};

// Called after every X update with the iteration count and the iterate.
using CGObserver = std::function<void(std::size_t iter, const CMatrix& x)>;

/**
 * Block conjugate gradient for Q X = I with per-column step sizes.
 *
 * All N columns run simultaneously from X = 0. With a preconditioner the
 * search directions are built from Z = M R; without one Z = R. A column
 * whose curvature |p_j^H s_j| drops below 1e-300 (or whose r_j^H z_j
 * vanishes) is frozen for the rest of the run. Stops after max_iters
 * iterations or as soon as the normalized residual falls below epsilon.
 */
CGState cg_inverse(const SystemMatrix& q, const LowRankPreconditioner* m, const CGConfig& cfg,
                   FlopCounter* fc = nullptr, const CGObserver& observer = {});

/// ||Q X - I||_F / sqrt(N).
double residual_norm(const SystemMatrix& q, const CMatrix& x);
double residual_norm(const CMatrix& q, const CMatrix& x);

/// sqrt(kappa) * ln(2 / epsilon) / 2, a diagnostic iteration estimate.
double iteration_bound_estimate(double kappa, double epsilon);

/// CSV rows "iter,residual,config_id", iterations numbered from 1.
void write_trajectory_csv(std::ostream& os, const std::vector<double>& history, std::string_view config_id,
                          bool header = true);

}  // namespace lrpcg
