// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "lrpcg/beamspace.hpp"
#include "lrpcg/commands.hpp"
#include "lrpcg/eval.hpp"
#include "lrpcg/linalg.hpp"
#include "lrpcg/precond.hpp"
#include "lrpcg/qrc.hpp"
#include "lrpcg/rcevd.hpp"
#include "lrpcg/scenario.hpp"
#include "lrpcg/scenario_io.hpp"
#include "oracles.hpp"

using namespace lrpcg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CMatrix conditioned(std::size_t n, std::size_t q, double cond, std::uint64_t seed) {
    const CMatrix left = oracle::mgs(oracle::random_matrix(n, q, seed));
    CMatrix ls = left;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j)
            ls(i, j) *= std::pow(cond, -static_cast<double>(j) / static_cast<double>(q - 1));
    return oracle::matmul(ls, oracle::random_unitary(q, seed + 7919));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario default_scenario(std::uint64_t seed = 1) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    return generate_scenario(cfg);
}

Outcome kernels() {
    const auto t0 = std::chrono::steady_clock::now();
    const CMatrix a = oracle::random_matrix(64, 48, 1), b = oracle::random_matrix(48, 32, 2);
    const double e_gemm = fro_norm(gemm(a, b) - oracle::matmul(a, b)) / fro_norm(oracle::matmul(a, b));

    const CMatrix g = oracle::random_matrix(64, 16, 3);
    const CMatrix w = gemm(g, g, Op::conj_trans);
    const CMatrix l = cholesky(w);
    const double e_chol = fro_norm(gemm(l, l, Op::none, Op::conj_trans) - w) / fro_norm(w);
    const CMatrix y = oracle::random_matrix(64, 16, 4);
    const double e_trsm = fro_norm(gemm(trsm_right_upper_ct(y, l), l, Op::none, Op::conj_trans) - y) / fro_norm(y);

    const CMatrix v = oracle::random_unitary(64, 5);
    std::vector<double> lam(64);
    for (std::size_t i = 0; i < 64; ++i) lam[i] = 100.0 * std::pow(0.9, static_cast<double>(i));
    const auto e = full_evd_oracle(hermitian_part(oracle::from_spectrum(v, lam)));
    double e_evd = 0.0;
    for (std::size_t i = 0; i < 64; ++i) e_evd = std::max(e_evd, std::abs(e.values[i] - lam[i]));
    const double secs = seconds_since(t0);

    const bool ok = e_gemm <= 1e-12 && e_chol <= 1e-12 && e_trsm <= 1e-12 && e_evd <= 1e-9 && secs < 10.0;
    return {ok, "gemm " + fmt("%.2e", e_gemm) + ", cholesky " + fmt("%.2e", e_chol) + ", trsm " + fmt("%.2e", e_trsm) +
                    ", evd " + fmt("%.2e", e_evd) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome qrc_suite() {
    double worst_orth = 0.0, worst_rec = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const double cond = std::pow(10.0, 4.0 * static_cast<double>(s) / 99.0);
        const CMatrix a = conditioned(256, 8, cond, 100 + s);
        const auto r = qrc_factor(a);
        worst_orth = std::max(worst_orth, orthonormality_error(r.q));
        worst_rec = std::max(worst_rec, fro_norm(gemm(r.q, r.r) - a) / fro_norm(a));
    }
    std::size_t improved = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto r = qrc_factor(conditioned(256, 8, 1e4, 500 + s));
        if (orthonormality_error(r.q) < r.first_pass_orthogonality) ++improved;
    }
    const bool ok = worst_orth <= 1e-10 && worst_rec <= 1e-10 && improved == 20;
    return {ok, "max orthogonality " + fmt("%.2e", worst_orth) + ", max reconstruction " + fmt("%.2e", worst_rec) +
                    ", second pass better on " + std::to_string(improved) + "/20 ill-conditioned inputs"};
}

double max_rel_eig_error(const std::vector<double>& got, const std::vector<double>& ref, std::size_t q) {
    double e = 0.0;
    for (std::size_t k = 0; k < q; ++k) e = std::max(e, std::abs(got[k] - ref[k]) / ref[k]);
    return e;
}

Outcome rcevd_accuracy() {
    const SystemMatrix q = assemble_q(default_scenario());
    const auto ref = full_evd_oracle(q.matrix());
    const CMatrix top = ref.vectors.block(0, 0, q.dim(), 8);
    const auto r = rcevd(q.matrix(), 8, 4, 0);
    const double eig = max_rel_eig_error(r.lambda, ref.values, 8);
    const double angle = max_principal_angle(r.u, top);
    std::size_t monotone = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const double e4 = max_rel_eig_error(rcevd(q.matrix(), 8, 4, s).lambda, ref.values, 8);
        const double e1 = max_rel_eig_error(rcevd(q.matrix(), 8, 1, s).lambda, ref.values, 8);
        if (e4 <= e1) ++monotone;
    }
    const bool ok = eig <= 1e-2 && angle <= 1e-2 && monotone == 20;
    return {ok, "eigenvalue error " + fmt("%.3e", eig) + ", max angle " + fmt("%.3e", angle) + " rad, lambda8/lambda9 " +
                    fmt("%.3f", ref.values[7] / ref.values[8]) + ", p=4 no worse than p=1 on " +
                    std::to_string(monotone) + "/20 seeds"};
}

Outcome woodbury() {
    const std::size_t n = 64, q = 8;
    const CMatrix v = oracle::random_unitary(n, 9);
    const double s2 = 2.0;
    std::vector<double> lam(q), full(n, s2);
    for (std::size_t k = 0; k < q; ++k) full[k] = lam[k] = 50.0 / (1.0 + static_cast<double>(k));
    const CMatrix q_hat = hermitian_part(oracle::from_spectrum(v, full));
    const LowRankPreconditioner m(v.block(0, 0, n, q), lam, s2);
    const double err = fro_norm(m.apply(q_hat) - CMatrix::identity(n));
    return {err <= 1e-9, "||M Q_hat - I||_F = " + fmt("%.2e", err)};
}

Outcome clustering() {
    const Scenario sc = default_scenario();
    const auto e = full_evd_oracle(assemble_q(sc).matrix());
    const double hi = 1.0 + 0.05 * (e.values.front() - 1.0);
    std::size_t inside = 0;
    for (double v : e.values)
        if (v >= 1.0 - 1e-9 && v <= hi) ++inside;
    const std::size_t streams = sc.config.n_ue * sc.config.n_s;
    const std::size_t slack = sc.config.n_ue * (sc.config.paths_per_user - sc.config.n_s);
    const std::size_t need = sc.antennas() - streams - slack;

    Scenario scaled = sc;
    double prev = condition_number(e.values);
    bool monotone = true;
    std::string kappas = fmt("%.3g", prev);
    for (int step = 0; step < 2; ++step) {
        for (auto& u : scaled.users) u.alpha *= 10.0;
        const double k = condition_number(full_evd_oracle(assemble_q(scaled).matrix()).values);
        monotone = monotone && k > prev;
        prev = k;
        kappas += " -> " + fmt("%.3g", k);
    }
    return {inside >= need && monotone, std::to_string(inside) + " eigenvalues clustered (need " + std::to_string(need) +
                                            "), kappa under x10 alpha steps " + kappas};
}

Outcome iteration_reduction() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t good = 0;
    std::ostringstream counts;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SystemMatrix q = assemble_q(default_scenario(seed));
        std::size_t it[4];
        const char* ids[4] = {"plain", "precond", "beam", "joint"};
        for (int c = 0; c < 4; ++c) it[c] = solve(q, preset_config(ids[c])).iterations();
        const bool ok = it[3] + 2 <= it[0] && it[1] + 1 <= it[0] && it[2] + 1 <= it[0];
        good += ok;
        counts << ' ' << it[0] << '/' << it[1] << '/' << it[2] << '/' << it[3];
    }
    const double secs = seconds_since(t0);
    return {good >= 16 && secs < 300.0, std::to_string(good) + "/20 seeds, " + fmt("%.1f", secs) +
                                            " s; plain/precond/beam/joint:" + counts.str()};
}

Outcome capacity_fidelity() {
    const Scenario sc = default_scenario();
    const SystemMatrix q = assemble_q(sc);
    const CMatrix exact = direct_inverse_oracle(q.matrix());
    const auto g0 = sinr_all(sc, exact);
    const double c0 = mean_capacity(g0, sc.users.size(), sc.config.n_s, sc.config.subcarriers);
    double worst = 0.0;
    std::string dominance;
    bool dom_all = true;
    for (const char* id : {"plain", "precond", "beam", "joint"}) {
        SolveConfig cfg = preset_config(id);
        cfg.cg.epsilon = 1e-6;
        const auto res = solve(q, cfg);
        const double c = mean_capacity(sinr_all(sc, res.x), sc.users.size(), sc.config.n_s, sc.config.subcarriers);
        worst = std::max(worst, std::abs(c - c0) / c0);

        SolveConfig trunc = preset_config(id);
        trunc.cg.max_iters = 3;
        trunc.cg.epsilon = 1e-12;
        const bool dom = dominates(g0, sinr_all(sc, solve(q, trunc).x));
        dom_all = dom_all && dom;
        dominance += std::string(" ") + id + (dom ? "=yes" : "=no");
    }
    return {worst <= 0.01 && dom_all,
            "worst capacity gap " + fmt("%.2e", worst) + "; exact CDF dominates 3-iteration CDF:" + dominance};
}

Outcome sinr_bound() {
    std::size_t checked = 0, violated = 0;
    double min_margin = 1e300;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Scenario sc = default_scenario(seed);
        const SystemMatrix q = assemble_q(sc);
        const CMatrix exact = direct_inverse_oracle(q.matrix());
        for (double eps : {0.1, 0.01})
            for (const char* id : {"plain", "precond", "beam", "joint"}) {
                SolveConfig cfg = preset_config(id);
                cfg.cg.epsilon = eps;
                for (const auto& row : check_sinr_bound(evaluate(sc, q, solve(q, cfg).x, exact))) {
                    ++checked;
                    violated += !row.holds;
                    if (row.bound_rhs > 0.0) min_margin = std::min(min_margin, row.margin / row.bound_rhs);
                }
            }
    }
    return {violated == 0, std::to_string(checked - violated) + "/" + std::to_string(checked) +
                               " (user, RE, config) checks hold, smallest relative margin " + fmt("%.3e", min_margin)};
}

Outcome beamspace_structure() {
    double unit = 0.0;
    bool unit_ok = true;
    for (std::size_t t : {8, 16}) {
        const BeamspaceOperator op(t);
        const double n = static_cast<double>(op.dim());
        const double e = fro_norm(gemm(op.f(), op.f(), Op::none, Op::conj_trans) - CMatrix::identity(op.dim()));
        unit = std::max(unit, e / std::sqrt(n));
        unit_ok = unit_ok && e <= 1e-11 * std::sqrt(n);
    }
    const SystemMatrix q = assemble_q(default_scenario());
    const BeamspaceOperator op(8);
    const SystemMatrix qb = to_beamspace(op, q);
    const auto e = full_evd_oracle(q.matrix()), eb = full_evd_oracle(qb.matrix());
    double eig = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        eig = std::max(eig, std::abs(e.values[i] - eb.values[i]) / e.values[i]);
    const double sa = sparsity_ratio(q.matrix(), 0.005), sb = sparsity_ratio(qb.matrix(), 0.005);
    return {unit_ok && eig <= 1e-9 && sb - sa >= 0.3, "unitarity " + fmt("%.2e", unit) + " sqrt(N), eigenvalues " +
                                                          fmt("%.2e", eig) + ", sparsity " + fmt("%.3f", sa) +
                                                          " -> " + fmt("%.3f", sb)};
}

Outcome counters() {
    const std::size_t n = 256, q = 8, p = 4, kprime = 4;
    const double dn = n, dq = q, dp = p;

    FlopCounter f_qrc;
    qrc_factor(oracle::random_matrix(n, q, 1), &f_qrc);
    const double r_qrc = static_cast<double>(f_qrc.multiplies()) / (2.0 * dn * dq * dq);

    ScenarioConfig cfg;
    cfg.side = 16;
    cfg.subcarriers = 1;
    const SystemMatrix qm = assemble_q(generate_scenario(cfg));
    FlopCounter f_evd;
    rcevd(qm.matrix(), q, p, 0, &f_evd);
    const double r_evd = static_cast<double>(f_evd.multiplies()) / ((dp + 1.0) * dn * dn * dq);

    FlopCounter f_pre;
    const auto m = build_preconditioner(qm, q, p, 0, &f_pre);
    FlopCounter f_apply;
    m.apply(CMatrix::identity(n), &f_apply);
    const double r_apply = static_cast<double>(f_apply.multiplies()) / (2.0 * dn * dn * dq);
    for (std::size_t k = 0; k < kprime; ++k) m.apply(CMatrix::identity(n), &f_pre);
    const double r_joint =
        static_cast<double>(f_pre.multiplies()) / ((dp + 1.0 + 2.0 * static_cast<double>(kprime)) * dn * dn * dq);

    auto near = [](double r) { return std::abs(r - 1.0) <= 0.15; };
    return {near(r_qrc) && near(r_evd) && near(r_apply) && near(r_joint),
            "measured/predicted: QRC " + fmt("%.3f", r_qrc) + " (2Nq^2), RC-EVD " + fmt("%.3f", r_evd) +
                " ((p+1)N^2q), apply " + fmt("%.3f", r_apply) + " (2N^2q), build+4 applies " + fmt("%.3f", r_joint)};
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "lrpcg_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    std::ostringstream sink;
    for (const char* run : {"a", "b"}) {
        GenOptions gen;
        gen.out_path = (root / (std::string(run) + ".bslv")).string();
        gen.seed = 11;
        cmd_gen(gen, sink);
        SweepOptions sw;
        sw.scenario_path = gen.out_path;
        sw.out_dir = (root / run).string();
        sw.iters = {0, 1, 2, 3, 5};
        cmd_sweep(sw, sink);
    }
    bool same = read_file((root / "a.bslv").string()) == read_file((root / "b.bslv").string());
    std::size_t files = 0;
    for (const char* f : {"capacity.csv", "cdf.csv", "bound.csv", "iterations.csv", "summary.txt"}) {
        same = same && read_file((root / "a" / f).string()) == read_file((root / "b" / f).string());
        ++files;
    }
    return {same, std::to_string(files) + " outputs and the scenario file compared byte for byte"};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> suite{
        {1, kernels},           {2, qrc_suite},          {3, rcevd_accuracy},    {4, woodbury},
        {5, clustering},        {6, iteration_reduction}, {7, capacity_fidelity}, {8, sinr_bound},
        {9, beamspace_structure}, {10, counters},        {11, determinism}};
    int failed = 0;
    for (const auto& [id, fn] : suite) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(suite.size()) - failed, suite.size());
    return failed == 0 ? 0 : 1;
}
