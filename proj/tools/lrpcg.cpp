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


// lrpcg: scenario generation, inversion runs, sweeps and reports.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "lrpcg/commands.hpp"
#include "lrpcg/scenario.hpp"

namespace {

std::vector<std::size_t> parse_iters(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            const long v = std::stol(item, &pos);
            if (pos != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw lrpcg::ConfigError("iters", "--iters: bad budget '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank preconditioned CG inversion benchmarks"};
    app.require_subcommand(1);

    lrpcg::GenOptions gen;
    std::uint64_t gen_seed = 0;
    auto* cmd_gen = app.add_subcommand("gen", "generate a scenario file");
    cmd_gen->add_option("config", gen.config_path, "scenario config (key = value); defaults if omitted");
    cmd_gen->add_option("-o,--out", gen.out_path, "output scenario file")->required();
    auto* seed_opt = cmd_gen->add_option("--seed", gen_seed, "override the config seed");

    lrpcg::InvertOptions inv;
    auto* cmd_inv = app.add_subcommand("invert", "approximate Q^-1 for a scenario");
    cmd_inv->add_option("scenario", inv.scenario_path)->required();
    cmd_inv->add_option("--domain", inv.domain)->check(CLI::IsMember({"antenna", "beamspace"}));
    cmd_inv->add_option("--precond", inv.precond)->check(CLI::IsMember({"none", "lowrank"}));
    cmd_inv->add_option("--q", inv.q, "preconditioner rank");
    cmd_inv->add_option("--p", inv.p, "power iterations");
    cmd_inv->add_option("--seed", inv.seed, "sketch seed");
    cmd_inv->add_option("--eps", inv.eps, "residual target");
    cmd_inv->add_option("--max-iters", inv.max_iters);
    cmd_inv->add_option("--trace", inv.trace_path, "residual trajectory CSV");
    cmd_inv->add_option("-o,--out", inv.out_path, "write X in the binary format");

    lrpcg::SweepOptions sw;
    std::string iters = "0,1,2,3,4,5,6,8,10,12";
    auto* cmd_sw = app.add_subcommand("sweep", "capacity, CDF and bound tables");
    cmd_sw->add_option("scenario", sw.scenario_path)->required();
    cmd_sw->add_option("--configs", sw.configs_path, "JSON list of configurations");
    cmd_sw->add_option("--iters", iters, "comma-separated iteration budgets");
    cmd_sw->add_option("-o,--out-dir", sw.out_dir);
    cmd_sw->add_option("--eps", sw.eps, "residual target for iteration counts");
    cmd_sw->add_option("--cdf-budget", sw.cdf_budget);
    cmd_sw->add_option("--bound-eps", sw.bound_eps)->delimiter(',');
    cmd_sw->add_option("--r", sw.r, "projector dimension");

    std::string run_dir;
    auto* cmd_rep = app.add_subcommand("report", "summarize a sweep directory");
    cmd_rep->add_option("run-dir", run_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : lrpcg::kExitConfig;
    }

    try {
        if (*cmd_gen) {
            if (*seed_opt) gen.seed = gen_seed;
            lrpcg::cmd_gen(gen, std::cout);
        } else if (*cmd_inv) {
            lrpcg::cmd_invert(inv, std::cout);
        } else if (*cmd_sw) {
            sw.iters = parse_iters(iters);
            lrpcg::cmd_sweep(sw, std::cout);
        } else if (*cmd_rep) {
            lrpcg::cmd_report(run_dir, std::cout);
        }
    } catch (const lrpcg::ConfigError& e) {
        std::cerr << "error: " << e.what() << " (key: " << e.key << ")\n";
        return lrpcg::kExitConfig;
    } catch (const lrpcg::NumericalBreakdown& e) {
        std::cerr << "error: " << e.what() << " (iteration " << e.iteration << ")\n";
        return lrpcg::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return lrpcg::exit_code(e);
    }
    return 0;
}
