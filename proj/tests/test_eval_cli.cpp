#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lrpcg/commands.hpp"
#include "lrpcg/eval.hpp"
#include "lrpcg/linalg.hpp"
#include "lrpcg/scenario_io.hpp"
#include "oracles.hpp"

using namespace lrpcg;
namespace fs = std::filesystem;

#ifndef LRPCG_CLI
#define LRPCG_CLI "lrpcg"
#endif

namespace {

Scenario small_default(std::uint32_t subcarriers = 16) {
    ScenarioConfig cfg;
    cfg.subcarriers = subcarriers;
    return generate_scenario(cfg);
}

// Scenario with unit-power channels set by hand.
Scenario handmade(std::vector<CMatrix> channels, double energy) {
    Scenario sc;
    sc.config.side = 2;
    sc.config.n_ue = static_cast<std::uint32_t>(channels.size());
    sc.config.subcarriers = 1;
    for (auto& h : channels) {
        UserStats u;
        u.r_bar = gemm(h, h, Op::none, Op::conj_trans);
        u.r_bar *= 4.0 / trace(u.r_bar).real();
        u.energy = energy;
        u.alpha = energy;
        sc.users.push_back(u);
        InstantChannel ch;
        ch.h.push_back(h);
        sc.channels.push_back(ch);
    }
    return sc;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lrpcg_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const int rc = std::system((std::string(LRPCG_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

}  // namespace

TEST_CASE("projector for identity X and a rank-one user") {
    UserStats u;
    const CMatrix a = steering_vector(4, 0.4, 0.1);
    u.r_bar = gemm(a, a, Op::none, Op::conj_trans);
    const CMatrix g = build_projector(CMatrix::identity(16), u, 1);
    const cplx ip = gemm(g, a)(0, 0);
    CHECK(std::abs(ip) == doctest::Approx(4.0));
    CHECK_THROWS_AS(build_projector(CMatrix::identity(16), u, 17), DimensionError);
}

TEST_CASE("projector from converged CG matches the exact one") {
    const Scenario sc = small_default();
    const SystemMatrix q = assemble_q(sc);
    SolveConfig cfg = preset_config("plain");
    cfg.cg.epsilon = 1e-8;
    const auto res = solve(q, cfg);
    const CMatrix exact = direct_inverse_oracle(q.matrix());
    for (const auto& u : sc.users) CHECK(fro_norm(build_projector(res.x, u) - build_projector(exact, u)) <= 1e-6);
}

TEST_CASE("single user SINR") {
    const Scenario sc = handmade({CMatrix{{1.0}, {0.0}, {0.0}, {0.0}}}, 3.0);
    const CMatrix g{{1.0, 0.0, 0.0, 0.0}};
    CHECK(post_beamforming_sinr(g, sc, 0, 0)[0] == doctest::Approx(3.0));
    CHECK(mmse_baseline_sinr(sc, 0, 0)[0] == doctest::Approx(3.0));
    CHECK(post_beamforming_sinr(CMatrix(1, 4), sc, 0, 0)[0] == 0.0);
}

TEST_CASE("orthogonal users do not interfere under exact LTBF") {
    const CMatrix a = steering_vector(2, 0.0, 0.0);
    const CMatrix b = steering_vector(2, std::asin(1.0 - 1e-12), 0.0);  // phase progression pi across x
    const Scenario both = handmade({a, b}, 2.0);
    REQUIRE(std::abs(gemm(a, b, Op::conj_trans)(0, 0)) <= 1e-6);
    const CMatrix x = direct_inverse_oracle(assemble_q(both).matrix());
    for (std::size_t u = 0; u < 2; ++u) {
        const Scenario alone = handmade({u == 0 ? a : b}, 2.0);
        const double solo = sinr_all(alone, direct_inverse_oracle(assemble_q(alone).matrix()), 1)[0];
        CHECK(std::abs(post_beamforming_sinr(build_projector(x, both.users[u], 1), both, u, 0)[0] - solo) <=
              0.05 * solo);
    }
}

TEST_CASE("exact inverse filter suppresses interference compared with X = I") {
    ScenarioConfig cfg;
    cfg.n_ue = 2;
    cfg.snr_db_low = 10.0;
    cfg.snr_db_high = 10.0;
    cfg.subcarriers = 8;
    const Scenario sc = generate_scenario(cfg);
    const CMatrix exact = direct_inverse_oracle(assemble_q(sc).matrix());
    const CMatrix eye = CMatrix::identity(64);
    // Interference power seen by user 0 through its full-rank projector.
    auto interference = [&](const CMatrix& x) {
        const CMatrix g = build_projector(x, sc.users[0], 64);
        double sig = 0.0, intf = 0.0;
        for (std::size_t k = 0; k < cfg.subcarriers; ++k) {
            sig += std::pow(fro_norm(gemm(g, sc.channels[0].h[k])), 2);
            intf += std::pow(fro_norm(gemm(g, sc.channels[1].h[k])), 2);
        }
        return intf / sig;
    };
    CHECK(interference(exact) < interference(eye));
}

TEST_CASE("MMSE baseline dominates and matches exact LTBF at full rank") {
    const Scenario sc = small_default(8);
    const CMatrix exact = direct_inverse_oracle(assemble_q(sc).matrix());
    const auto g4 = sinr_all(sc, exact, 4);
    const auto g64 = sinr_all(sc, exact, 64);
    for (std::size_t u = 0; u < sc.users.size(); ++u)
        for (std::size_t k = 0; k < 8; ++k) {
            const double m = mmse_baseline_sinr(sc, u, k)[0];
            CHECK(m >= g4[u * 8 + k] * (1.0 - 1e-9));
            CHECK(std::abs(m - g64[u * 8 + k]) <= 0.01 * m);
        }
}

TEST_CASE("bound report") {
    const Scenario sc = small_default();
    const SystemMatrix q = assemble_q(sc);
    const CMatrix exact = direct_inverse_oracle(q.matrix());

    auto rep = evaluate(sc, q, exact, exact);
    CHECK(rep.gamma == rep.gamma0);
    CHECK(rep.capacity == rep.capacity0);
    rep.epsilon = 0.0;
    for (const auto& row : check_sinr_bound(rep)) {
        CHECK(row.bound_rhs == row.gamma);
        CHECK(row.holds);
    }

    SolveConfig cfg = preset_config("plain");
    cfg.cg.epsilon = 0.1;
    rep = evaluate(sc, q, solve(q, cfg).x, exact);
    CHECK(rep.epsilon < 0.1);
    for (const auto& row : check_sinr_bound(rep)) CHECK(row.holds);

    // Heavily corrupted X: the right side collapses and the bound stays slack.
    CMatrix noisy = exact;
    CMatrix noise = oracle::random_matrix(64, 64, 3);
    noise *= 0.5 / fro_norm(gemm(q.matrix(), noise)) * 8.0;
    noisy += noise;
    rep = evaluate(sc, q, noisy, exact);
    CHECK(rep.epsilon == doctest::Approx(0.5).epsilon(0.05));
    for (const auto& row : check_sinr_bound(rep)) {
        CHECK(row.bound_rhs < 0.25 * rep.gamma0[rep.index(row.user, row.stream, row.subcarrier)]);
        CHECK(row.holds);
    }
}

TEST_CASE("capacity versus iterations") {
    const Scenario sc = small_default(8);
    const std::vector<SolveConfig> cfgs{preset_config("plain"), preset_config("joint")};
    const std::vector<std::size_t> budgets{0, 1, 2, 3, 30};
    const auto rows = capacity_vs_iterations(sc, cfgs, budgets);
    REQUIRE(rows.size() == 10);
    const double exact = mean_capacity(sinr_all(sc, direct_inverse_oracle(assemble_q(sc).matrix())), 4, 1, 8);
    for (const auto& r : rows) {
        if (r.iters == 0) CHECK(r.capacity == 0.0);
        if (r.iters == 30) CHECK(std::abs(r.capacity - exact) <= 0.01 * exact);
    }
    CHECK(capacity_vs_iterations(sc, cfgs, std::vector<std::size_t>{}).empty());
}

TEST_CASE("CDF assembly and dominance") {
    const std::vector<double> one{10.0};
    const auto c1 = sinr_cdf(one);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].gamma_db == doctest::Approx(10.0));
    CHECK(c1[0].cdf == 1.0);
    const std::vector<double> two{2.0, 2.0};
    const auto c2 = sinr_cdf(two);
    CHECK(c2[0].gamma_db == c2[1].gamma_db);
    CHECK(c2[0].cdf == 0.5);
    CHECK(c2[1].cdf == 1.0);
    CHECK_THROWS_AS(sinr_cdf(std::vector<double>{}), ValidationError);

    const std::vector<double> hi{3.0, 5.0, 1.0}, lo{0.5, 4.0, 1.0};
    CHECK(dominates(hi, lo));
    CHECK_FALSE(dominates(lo, hi));
}

TEST_CASE("pipeline presets") {
    CHECK(preset_config("joint").domain == Domain::beamspace);
    CHECK(preset_config("joint").precond);
    CHECK_FALSE(preset_config("beam").precond);
    const auto c = preset_config("precond-q4-p2");
    CHECK(c.q == 4);
    CHECK(c.p == 2);
    CHECK(c.domain == Domain::antenna);
    CHECK_THROWS_AS(preset_config("fancy"), ConfigError);

    const auto parsed = parse_solve_configs(R"({"configs": ["plain", {"id": "x", "domain": "beamspace", "precond": "lowrank", "q": 4, "p": 1}]})");
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[1].q == 4);
    CHECK(parsed[1].domain == Domain::beamspace);
    CHECK_THROWS_AS(parse_solve_configs(R"(["nope"])"), ConfigError);
    CHECK_THROWS_AS(parse_solve_configs(R"([{"id": "x", "colour": 1}])"), ConfigError);
    CHECK_THROWS_AS(parse_solve_configs("{not json"), ConfigError);
}

TEST_CASE("joint configuration needs the fewest iterations") {
    const SystemMatrix q = assemble_q(generate_scenario(ScenarioConfig{}));
    std::map<std::string, std::size_t> it;
    for (const char* id : {"plain", "precond", "beam", "joint"}) it[id] = solve(q, preset_config(id)).iterations();
    for (const auto& [id, n] : it) CHECK(it["joint"] <= n);
}

TEST_CASE("commands write files and report") {
    const fs::path dir = scratch("cmd");
    std::ostringstream out;
    GenOptions gen;
    gen.out_path = (dir / "s.bslv").string();
    gen.seed = 3;
    cmd_gen(gen, out);
    CHECK(out.str().find("kappa = ") != std::string::npos);

    // The printed kappa agrees with the Jacobi oracle.
    const Scenario sc = load_scenario(gen.out_path);
    const double kappa = condition_number(full_evd_oracle(assemble_q(sc).matrix()).values);
    const auto pos = out.str().find("kappa = ") + 8;
    CHECK(std::stod(out.str().substr(pos)) == doctest::Approx(kappa).epsilon(1e-9));

    InvertOptions inv;
    inv.scenario_path = gen.out_path;
    inv.trace_path = (dir / "trace.csv").string();
    inv.out_path = (dir / "x.bslv").string();
    std::ostringstream iout;
    cmd_invert(inv, iout);
    const auto ipos = iout.str().find("iterations = ") + 13;
    const std::size_t iters = std::stoul(iout.str().substr(ipos));
    std::size_t lines = 0;
    for (char ch : slurp(inv.trace_path)) lines += ch == '\n';
    CHECK(lines == iters + 1);
    CHECK(load_matrices(inv.out_path).at(0).rows() == 64);

    SweepOptions sw;
    sw.scenario_path = gen.out_path;
    sw.out_dir = (dir / "empty").string();
    sw.iters = {};
    std::ostringstream sout;
    cmd_sweep(sw, sout);
    CHECK(slurp(dir / "empty" / "capacity.csv") == "config_id,iters,capacity\n");
    CHECK(slurp(dir / "empty" / "cdf.csv") == "gamma_db,cdf,config_id\n");

    std::ostringstream rout;
    fs::create_directories(dir / "nothing");
    cmd_report((dir / "nothing").string(), rout);
    CHECK(rout.str() == "no runs\n");
    CHECK_THROWS_AS(cmd_report((dir / "absent").string(), rout), std::ios_base::failure);
}

TEST_CASE("report shows sparsity and joint gains") {
    const fs::path dir = scratch("report");
    std::ostringstream out;
    GenOptions gen;
    gen.out_path = (dir / "s.bslv").string();
    cmd_gen(gen, out);
    SweepOptions sw;
    sw.scenario_path = gen.out_path;
    sw.out_dir = dir.string();
    sw.iters = {1, 2, 3};
    sw.bound_eps = {0.1};
    cmd_sweep(sw, out);
    std::ostringstream rep;
    cmd_report(dir.string(), rep);
    const std::string text = rep.str();
    auto value = [&](const std::string& key) {
        const auto p = text.find(key + " = ");
        REQUIRE(p != std::string::npos);
        return std::stod(text.substr(p + key.size() + 3));
    };
    CHECK(value("sparsity_beamspace") > value("sparsity_antenna"));
    const auto iters = [&] {
        std::map<std::string, std::size_t> m;
        std::ifstream in(dir / "iterations.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string id, it;
            std::getline(ss, id, ',');
            std::getline(ss, it, ',');
            m[id] = std::stoul(it);
        }
        return m;
    }();
    CHECK(iters.at("joint") < iters.at("plain"));
    CHECK(text.find("saved_vs_plain") != std::string::npos);
}

TEST_CASE("CLI exit codes") {
    const fs::path dir = scratch("cli");
    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "T = 8\nwibble = 3\n";
    }
    CHECK(run_cli("gen " + (dir / "bad.cfg").string() + " -o " + (dir / "x.bslv").string()) == 2);
    CHECK(run_cli("gen -o " + (dir / "s.bslv").string() + " --seed 5") == 0);
    CHECK(run_cli("gen -o " + (dir / "t.bslv").string() + " --seed 5") == 0);
    CHECK(slurp(dir / "s.bslv") == slurp(dir / "t.bslv"));
    CHECK(run_cli("invert " + (dir / "missing.bslv").string()) == 4);
    CHECK(run_cli("invert " + (dir / "s.bslv").string() + " --domain sideways") == 2);
    {
        std::ofstream cfg(dir / "configs.json");
        cfg << R"(["plain", "unknown-thing"])";
    }
    CHECK(run_cli("sweep " + (dir / "s.bslv").string() + " --configs " + (dir / "configs.json").string() +
                  " -o " + dir.string()) == 2);
    {
        std::ofstream junk(dir / "junk.bslv");
        junk << "BSLV garbage";
    }
    CHECK(run_cli("invert " + (dir / "junk.bslv").string()) == 4);
    CHECK(run_cli("report " + dir.string()) == 0);
    CHECK(run_cli("bogus") == 2);
}
