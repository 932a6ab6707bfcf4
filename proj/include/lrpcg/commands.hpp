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

/// @file commands.hpp
/// Batch front end behind the lrpcg tool. Each command throws on failure;
/// exit_code() maps the exception to the process status.

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrpcg/pipeline.hpp"

namespace lrpcg {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIO = 4 };

/// 2 for configuration errors, 3 for numerical failures, 4 for I/O and
/// file-format errors.
int exit_code(const std::exception& e);

struct GenOptions {
    std::string config_path;  // empty: built-in defaults
    std::string out_path;
    std::optional<std::uint64_t> seed;
};

/// Writes the scenario file and prints key = value summary lines.
void cmd_gen(const GenOptions& opt, std::ostream& out);

struct InvertOptions {
    std::string scenario_path;
    std::string domain = "antenna";
    std::string precond = "none";  // none | lowrank
    std::size_t q = kDefaultRank;
    std::size_t p = kDefaultPowerIters;
    std::uint64_t seed = 0;
    double eps = 1e-3;
    std::size_t max_iters = 100;
    std::string trace_path;  // optional residual trajectory CSV
    std::string out_path;    // optional X in the binary format
};

void cmd_invert(const InvertOptions& opt, std::ostream& out);

struct SweepOptions {
    std::string scenario_path;
    std::string configs_path;  // empty: plain, precond, beam, joint
    std::vector<std::size_t> iters{0, 1, 2, 3, 4, 5, 6, 8, 10, 12};
    std::string out_dir = ".";
    double eps = 1e-3;          // target for the iteration counts
    double curve_eps = 1e-9;    // CG target while tracing capacity curves
    std::size_t cdf_budget = 3;
    std::vector<double> bound_eps{0.1, 0.01};
    std::size_t r = 4;
};

/// Writes capacity.csv, cdf.csv, bound.csv, iterations.csv and
/// summary.txt into out_dir. An empty iteration list leaves the first
/// three with headers only.
void cmd_sweep(const SweepOptions& opt, std::ostream& out);

/// Summarizes a sweep directory. A directory without results prints
/// "no runs".
void cmd_report(const std::string& run_dir, std::ostream& out);

/// JSON: an array (or {"configs": [...]}) of preset ids or objects with
/// id, domain, precond ("none" | "lowrank" | bool), q, p, seed.
std::vector<SolveConfig> load_solve_configs(const std::string& path);
std::vector<SolveConfig> parse_solve_configs(const std::string& json_text);

}  // namespace lrpcg
