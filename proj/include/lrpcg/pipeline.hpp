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

/// @file pipeline.hpp
/// One inversion run: optional beamspace transform, optional low-rank
/// preconditioner, block CG, and the map back to the antenna domain.

#include <cstdint>
#include <functional>
#include <string>

#include "lrpcg/beamspace.hpp"
#include "lrpcg/cg.hpp"
#include "lrpcg/rcevd.hpp"
#include "lrpcg/system_matrix.hpp"

namespace lrpcg {

struct SolveConfig {
    std::string id = "plain";
    Domain domain = Domain::antenna;
    bool precond = false;
    std::size_t q = kDefaultRank;
    std::size_t p = kDefaultPowerIters;
    std::uint64_t seed = 0;  // RC-EVD sketch seed
    CGConfig cg;
    TransformMethod method = TransformMethod::fft;
};

/// The four configurations of the iteration study: "plain", "precond",
/// "beam" and "joint". Ids of the form "<precond|joint>-q<Q>-p<P>" select a
/// preconditioner rank and power-iteration count. Throws ConfigError for
/// anything else.
SolveConfig preset_config(const std::string& id);

struct SolveResult {
    CMatrix x;              // antenna-domain approximation of Q^{-1}
    CGState state;          // in the solve domain
    double residual = 0.0;  // ||Q X - I||_F / sqrt(N), antenna domain
    FlopCounter flops;

    std::size_t iterations() const noexcept { return state.iter; }
    bool converged() const noexcept { return state.converged; }
};

// Receives the antenna-domain iterate after every CG step.
using SolveObserver = std::function<void(std::size_t iter, const CMatrix& x)>;

/// q must be in the antenna domain.
SolveResult solve(const SystemMatrix& q, const SolveConfig& cfg, const SolveObserver& observer = {});

}  // namespace lrpcg
