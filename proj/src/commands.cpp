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


#include "lrpcg/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lrpcg/beamspace.hpp"
#include "lrpcg/eval.hpp"
#include "lrpcg/format.hpp"
#include "lrpcg/linalg.hpp"
#include "lrpcg/scenario.hpp"
#include "lrpcg/scenario_io.hpp"

namespace lrpcg {

namespace fs = std::filesystem;

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const std::ios_base::failure*>(&e) ||
        dynamic_cast<const fs::filesystem_error*>(&e))
        return kExitIO;
    return kExitNumerical;
}

namespace {

struct SpectrumSummary {
    double lambda_max = 0.0, lambda_min = 0.0, kappa = 0.0;
    std::size_t clustered = 0;
};

SpectrumSummary summarize_spectrum(const SystemMatrix& q) {
    const auto ev = hermitian_evd(q.matrix());
    SpectrumSummary s;
    s.lambda_max = ev.values.front();
    s.lambda_min = ev.values.back();
    s.kappa = condition_number(ev.values);
    const double hi = 1.0 + 0.05 * (s.lambda_max - 1.0);
    for (double v : ev.values)
        if (v >= 1.0 - 1e-9 && v <= hi) ++s.clustered;
    return s;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw std::ios_base::failure("cannot open " + p.string() + " for writing");
    return os;
}

void finish(std::ofstream& os, const fs::path& p) {
    os.flush();
    if (!os) throw std::ios_base::failure("write to " + p.string() + " failed");
}

SolveConfig config_from_json(const nlohmann::json& j) {
    if (j.is_string()) return preset_config(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("configs", "configs: entries must be preset ids or objects");
    for (const auto& [key, _] : j.items())
        if (key != "id" && key != "domain" && key != "precond" && key != "q" && key != "p" && key != "seed")
            throw ConfigError(key, "configs: unknown key '" + key + "'");
    if (!j.contains("id") || !j["id"].is_string()) throw ConfigError("id", "configs: every object needs a string id");
    SolveConfig cfg;
    cfg.id = j["id"].get<std::string>();
    if (j.contains("domain")) {
        try {
            cfg.domain = parse_domain(j["domain"].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError("domain", std::string("configs: ") + e.what());
        }
    }
    if (j.contains("precond")) {
        const auto& pc = j["precond"];
        if (pc.is_boolean()) cfg.precond = pc.get<bool>();
        else if (pc == "lowrank") cfg.precond = true;
        else if (pc == "none") cfg.precond = false;
        else throw ConfigError("precond", "configs: precond must be none or lowrank");
    }
    if (j.contains("q")) cfg.q = j["q"].get<std::size_t>();
    if (j.contains("p")) cfg.p = j["p"].get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

Domain domain_option(const std::string& s) {
    try {
        return parse_domain(s);
    } catch (const std::exception& e) {
        throw ConfigError("domain", e.what());
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// Header-keyed CSV rows.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::ios_base::failure("cannot open " + p.string());
    std::string line;
    std::vector<std::map<std::string, std::string>> rows;
    if (!std::getline(in, line)) return rows;
    const auto header = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<SolveConfig> parse_solve_configs(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("configs", std::string("configs: ") + e.what());
    }
    if (j.is_object() && j.contains("configs")) j = j["configs"];
    if (!j.is_array()) throw ConfigError("configs", "configs: expected an array of configurations");
    std::vector<SolveConfig> out;
    try {
        for (const auto& e : j) out.push_back(config_from_json(e));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("configs", std::string("configs: ") + e.what());
    }
    return out;
}

std::vector<SolveConfig> load_solve_configs(const std::string& path) { return parse_solve_configs(read_file(path)); }

void cmd_gen(const GenOptions& opt, std::ostream& out) {
    ScenarioConfig cfg = opt.config_path.empty() ? ScenarioConfig{} : load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.validate();
    const Scenario sc = generate_scenario(cfg);
    save_scenario(opt.out_path, sc);

    const SystemMatrix q = assemble_q(sc);
    const auto spec = summarize_spectrum(q);
    const BeamspaceOperator op(cfg.side);
    out << "N = " << q.dim() << '\n'
        << "n_ue = " << cfg.n_ue << '\n'
        << "seed = " << cfg.seed << '\n'
        << "kappa = " << fmt_double(spec.kappa) << '\n'
        << "lambda_max = " << fmt_double(spec.lambda_max) << '\n'
        << "lambda_min = " << fmt_double(spec.lambda_min) << '\n'
        << "clustered_eigenvalues = " << spec.clustered << '\n'
        << "sparsity_antenna = " << fmt_double(sparsity_ratio(q.matrix())) << '\n'
        << "sparsity_beamspace = " << fmt_double(sparsity_ratio(to_beamspace(op, q).matrix())) << '\n';
}

void cmd_invert(const InvertOptions& opt, std::ostream& out) {
    SolveConfig cfg;
    cfg.domain = domain_option(opt.domain);
    if (opt.precond == "lowrank") cfg.precond = true;
    else if (opt.precond != "none") throw ConfigError("precond", "--precond must be none or lowrank");
    cfg.id = std::string(to_string(cfg.domain)) + (cfg.precond ? "-lowrank" : "-none");
    cfg.q = opt.q;
    cfg.p = opt.p;
    cfg.seed = opt.seed;
    cfg.cg.epsilon = opt.eps;
    cfg.cg.max_iters = opt.max_iters;
    if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ConfigError("eps", "--eps must lie in (0, 1)");

    const Scenario sc = load_scenario(opt.scenario_path);
    const SystemMatrix q = assemble_q(sc);
    if (opt.max_iters > 10 * q.dim()) throw ConfigError("max-iters", "--max-iters exceeds 10 N");
    const SolveResult res = solve(q, cfg);

    if (!opt.trace_path.empty()) {
        auto os = open_out(opt.trace_path);
        write_trajectory_csv(os, res.state.residual_history, cfg.id);
        finish(os, opt.trace_path);
    }
    if (!opt.out_path.empty()) {
        const std::vector<CMatrix> xs{res.x};
        save_matrices(opt.out_path, xs);
    }
    out << "config = " << cfg.id << '\n'
        << "iterations = " << res.iterations() << '\n'
        << "converged = " << (res.converged() ? 1 : 0) << '\n'
        << "residual = " << fmt_double(res.residual) << '\n'
        << "complex_multiplies = " << res.flops.multiplies() << '\n'
        << "complex_additions = " << res.flops.additions() << '\n';
    for (const auto& [kernel, c] : res.flops.breakdown()) out << "multiplies." << kernel << " = " << c.mul << '\n';
}

void cmd_sweep(const SweepOptions& opt, std::ostream& out) {
    const auto configs =
        opt.configs_path.empty()
            ? std::vector<SolveConfig>{preset_config("plain"), preset_config("precond"), preset_config("beam"),
                                       preset_config("joint")}
            : load_solve_configs(opt.configs_path);
    if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ConfigError("eps", "--eps must lie in (0, 1)");
    for (double e : opt.bound_eps)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("bound-eps", "--bound-eps values must lie in (0, 1)");

    const Scenario sc = load_scenario(opt.scenario_path);
    const SystemMatrix q = assemble_q(sc);
    const CMatrix x_exact = direct_inverse_oracle(q.matrix());
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);

    // Iterations to the target residual.
    {
        auto os = open_out(dir / "iterations.csv");
        os << "config_id,iterations,converged,residual,complex_multiplies\n";
        for (auto cfg : configs) {
            cfg.cg.epsilon = opt.eps;
            const auto res = solve(q, cfg);
            os << cfg.id << ',' << res.iterations() << ',' << (res.converged() ? 1 : 0) << ','
               << fmt_double(res.residual) << ',' << res.flops.multiplies() << '\n';
        }
        finish(os, dir / "iterations.csv");
    }

    std::vector<SolveConfig> curve_cfgs = configs;
    for (auto& c : curve_cfgs) c.cg.epsilon = opt.curve_eps;
    {
        auto os = open_out(dir / "capacity.csv");
        write_capacity_csv(os, capacity_vs_iterations(sc, curve_cfgs, opt.iters, opt.r));
        finish(os, dir / "capacity.csv");
    }
    {
        auto os = open_out(dir / "cdf.csv");
        write_cdf_csv(os, {}, "", true);
        if (!opt.iters.empty()) {
            write_cdf_csv(os, sinr_cdf(sinr_all(sc, x_exact, opt.r)), "exact", false);
            for (auto cfg : curve_cfgs) {
                cfg.cg.max_iters = opt.cdf_budget;
                const CMatrix x = opt.cdf_budget == 0 ? CMatrix(q.dim(), q.dim()) : solve(q, cfg).x;
                write_cdf_csv(os, sinr_cdf(sinr_all(sc, x, opt.r)), cfg.id, false);
            }
        }
        finish(os, dir / "cdf.csv");
    }
    {
        auto os = open_out(dir / "bound.csv");
        write_bound_csv(os, {}, "", true);
        if (!opt.iters.empty())
            for (double e : opt.bound_eps)
                for (auto cfg : configs) {
                    cfg.cg.epsilon = e;
                    const auto res = solve(q, cfg);
                    write_bound_csv(os, check_sinr_bound(evaluate(sc, q, res.x, x_exact, opt.r)), cfg.id, false);
                }
        finish(os, dir / "bound.csv");
    }

    const auto spec = summarize_spectrum(q);
    const BeamspaceOperator op(sc.config.side);
    std::vector<double> mmse;
    for (std::size_t u = 0; u < sc.users.size(); ++u)
        for (std::size_t k = 0; k < sc.config.subcarriers; ++k) {
            const auto g = mmse_baseline_sinr(sc, u, k);
            mmse.insert(mmse.end(), g.begin(), g.end());
        }
    // mmse is ordered (user, subcarrier, stream); capacity only needs the multiset.
    const double cap_mmse = mean_capacity(mmse, sc.users.size(), sc.config.n_s, sc.config.subcarriers);
    const double cap_exact =
        mean_capacity(sinr_all(sc, x_exact, opt.r), sc.users.size(), sc.config.n_s, sc.config.subcarriers);
    {
        auto os = open_out(dir / "summary.txt");
        os << "N = " << q.dim() << '\n'
           << "n_ue = " << sc.config.n_ue << '\n'
           << "seed = " << sc.config.seed << '\n'
           << "kappa = " << fmt_double(spec.kappa) << '\n'
           << "epsilon = " << fmt_double(opt.eps) << '\n'
           << "sparsity_antenna = " << fmt_double(sparsity_ratio(q.matrix())) << '\n'
           << "sparsity_beamspace = " << fmt_double(sparsity_ratio(to_beamspace(op, q).matrix())) << '\n'
           << "capacity_exact = " << fmt_double(cap_exact) << '\n'
           << "capacity_mmse = " << fmt_double(cap_mmse) << '\n';
        finish(os, dir / "summary.txt");
    }
    out << "wrote " << (dir / "capacity.csv").string() << ", cdf.csv, bound.csv, iterations.csv, summary.txt\n";
}

void cmd_report(const std::string& run_dir, std::ostream& out) {
    const fs::path dir(run_dir);
    if (!fs::is_directory(dir)) throw std::ios_base::failure("run directory " + run_dir + " does not exist");
    const bool has_iters = fs::exists(dir / "iterations.csv");
    const bool has_cap = fs::exists(dir / "capacity.csv");
    if (!has_iters && !has_cap) {
        out << "no runs\n";
        return;
    }

    if (fs::exists(dir / "summary.txt")) {
        std::ifstream in(dir / "summary.txt");
        std::string line;
        while (std::getline(in, line)) out << line << '\n';
        out << '\n';
    }

    if (has_iters) {
        const auto rows = read_csv(dir / "iterations.csv");
        long base = -1;
        for (const auto& r : rows)
            if (r.at("config_id") == "plain") base = std::stol(r.at("iterations"));
        out << "config             iterations  saved_vs_plain\n";
        for (const auto& r : rows) {
            const long it = std::stol(r.at("iterations"));
            char buf[96];
            std::snprintf(buf, sizeof buf, "%-18s %10ld  %s\n", r.at("config_id").c_str(), it,
                          base < 0 ? "n/a" : std::to_string(base - it).c_str());
            out << buf;
        }
        out << '\n';
    }

    if (has_cap) {
        const auto rows = read_csv(dir / "capacity.csv");
        std::map<std::size_t, double> plain;
        for (const auto& r : rows)
            if (r.at("config_id") == "plain") plain[std::stoul(r.at("iters"))] = std::stod(r.at("capacity"));
        out << "config             iters    capacity  delta_vs_plain_pct\n";
        for (const auto& r : rows) {
            const std::size_t it = std::stoul(r.at("iters"));
            const double c = std::stod(r.at("capacity"));
            std::string delta = "n/a";
            if (auto f = plain.find(it); f != plain.end() && f->second > 0.0)
                delta = fmt_short(100.0 * (c - f->second) / f->second, 4);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%-18s %5zu  %10.4f  %s\n", r.at("config_id").c_str(), it, c, delta.c_str());
            out << buf;
        }
    }
}

}  // namespace lrpcg
