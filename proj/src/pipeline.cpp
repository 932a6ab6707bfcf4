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


#include "lrpcg/pipeline.hpp"

#include <cmath>
#include <optional>
#include <regex>

#include "lrpcg/precond.hpp"
#include "lrpcg/scenario.hpp"

namespace lrpcg {

SolveConfig preset_config(const std::string& id) {
    SolveConfig cfg;
    cfg.id = id;
    if (id == "plain") return cfg;
    if (id == "beam") {
        cfg.domain = Domain::beamspace;
        return cfg;
    }
    static const std::regex pattern(R"((precond|joint)(?:-q(\d+)-p(\d+))?)");
    std::smatch m;
    if (!std::regex_match(id, m, pattern)) throw ConfigError(id, "unknown config id '" + id + "'");
    cfg.precond = true;
    cfg.domain = m[1] == "joint" ? Domain::beamspace : Domain::antenna;
    if (m[2].matched) {
        cfg.q = std::stoul(m[2]);
        cfg.p = std::stoul(m[3]);
    }
    return cfg;
}

SolveResult solve(const SystemMatrix& q, const SolveConfig& cfg, const SolveObserver& observer) {
    if (q.domain() != Domain::antenna) throw ValidationError("solve: expected an antenna-domain system matrix");
    SolveResult res;
    const bool beam = cfg.domain == Domain::beamspace;

    std::optional<BeamspaceOperator> op;
    SystemMatrix work = q;
    if (beam) {
        const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(q.dim()))));
        if (side * side != q.dim())
            throw DimensionError("solve: beamspace needs N = T^2, got N = " + std::to_string(q.dim()));
        op.emplace(side);
        work = to_beamspace(*op, q, cfg.method, &res.flops);
    }

    LowRankPreconditioner m;
    if (cfg.precond) m = build_preconditioner(work, cfg.q, cfg.p, cfg.seed, &res.flops);

    auto back = [&](const CMatrix& x) { return beam ? from_beamspace(*op, x, cfg.method) : x; };
    CGObserver inner;
    if (observer) inner = [&](std::size_t it, const CMatrix& x) { observer(it, back(x)); };

    FlopCounter cg_flops;
    res.state = cg_inverse(work, cfg.precond ? &m : nullptr, cfg.cg, &cg_flops, inner);
    res.flops.merge(cg_flops, "cg.");
    res.x = beam ? from_beamspace(*op, res.state.x, cfg.method, &res.flops) : res.state.x;
    res.residual = residual_norm(q, res.x);
    return res;
}

}  // namespace lrpcg
