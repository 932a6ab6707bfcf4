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


#include "lrpcg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "lrpcg/format.hpp"
#include "lrpcg/linalg.hpp"

namespace lrpcg {

namespace {

// gamma = scale * h^H C^{-1} h through a Cholesky solve, regularizing C
// once if it is numerically singular.
double quadratic_form(CMatrix c, const CMatrix& h, double scale) {
    const double tr = trace(c).real();
    if (!(tr > 0.0)) return 0.0;
    CMatrix l;
    try {
        l = cholesky(c);
    } catch (const NotPositiveDefinite&) {
        const double reg = 1e-12 * tr / static_cast<double>(c.rows());
        for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) += reg;
        try {
            l = cholesky(c);
        } catch (const NotPositiveDefinite& e) {
            throw ConvergenceError(std::string("SINR: interference covariance singular after regularization: ") +
                                   e.what());
        }
    }
    const CMatrix y = trsm_lower(l, h);
    double acc = 0.0;
    for (const auto& z : y.data()) acc += std::norm(z);
    return scale * acc;
}

void add_outer(CMatrix& c, const CMatrix& v, std::size_t col, double w) {
    for (std::size_t a = 0; a < c.rows(); ++a) {
        const cplx va = w * v(a, col);
        for (std::size_t b = 0; b < c.cols(); ++b) c(a, b) += va * std::conj(v(b, col));
    }
}

// Per-stream SINRs when every user's channel on this subcarrier has
// already been mapped through the receive filter, plus the filtered noise
// covariance.
std::vector<double> mmse_streams(const Scenario& sc, std::size_t user, const std::vector<CMatrix>& seen,
                                 const CMatrix& noise) {
    const std::size_t ns = sc.config.n_s;
    std::vector<double> out(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
        CMatrix c = noise;
        for (std::size_t j = 0; j < sc.users.size(); ++j) {
            const double w = sc.users[j].energy / static_cast<double>(ns);
            for (std::size_t t = 0; t < ns; ++t)
                if (j != user || t != s) add_outer(c, seen[j], t, w);
        }
        out[s] = quadratic_form(hermitian_part(c), seen[user].column(s), sc.users[user].energy / static_cast<double>(ns));
    }
    return out;
}

std::vector<double> sinr_with_projector(const CMatrix& g, const Scenario& sc, std::size_t user, std::size_t k) {
    bool zero = true;
    for (const auto& z : g.data())
        if (z != cplx(0.0)) {
            zero = false;
            break;
        }
    if (zero) return std::vector<double>(sc.config.n_s, 0.0);
    std::vector<CMatrix> seen;
    seen.reserve(sc.users.size());
    for (const auto& ch : sc.channels) seen.push_back(gemm(g, ch.h.at(k)));
    CMatrix noise = gemm(g, g, Op::none, Op::conj_trans);
    noise *= sc.config.n0;
    return mmse_streams(sc, user, seen, noise);
}

void require_user(const Scenario& sc, std::size_t user, std::size_t k) {
    if (user >= sc.users.size() || user >= sc.channels.size())
        throw DimensionError("SINR: user index " + std::to_string(user) + " out of range");
    if (k >= sc.channels[user].h.size())
        throw DimensionError("SINR: subcarrier " + std::to_string(k) + " out of range");
}

}  // namespace

CMatrix build_projector(const CMatrix& x, const UserStats& user, std::size_t r) {
    const std::size_t n = user.r_bar.rows();
    if (r == 0 || r > n) throw DimensionError("build_projector: r = " + std::to_string(r) + " with N = " + std::to_string(n));
    if (x.rows() != n || x.cols() != n)
        throw DimensionError("build_projector: X is " + shape_string(x) + ", covariance is " + shape_string(user.r_bar));
    const auto ev = hermitian_evd(user.r_bar);
    const CMatrix v = ev.vectors.block(0, 0, n, r);
    return gemm(v, x, Op::conj_trans, Op::none);
}

std::vector<double> post_beamforming_sinr(const CMatrix& g, const Scenario& sc, std::size_t user,
                                          std::size_t subcarrier) {
    require_user(sc, user, subcarrier);
    if (g.cols() != sc.antennas()) throw DimensionError("SINR: projector is " + shape_string(g));
    return sinr_with_projector(g, sc, user, subcarrier);
}

std::vector<double> mmse_baseline_sinr(const Scenario& sc, std::size_t user, std::size_t subcarrier) {
    require_user(sc, user, subcarrier);
    std::vector<CMatrix> seen;
    for (const auto& ch : sc.channels) seen.push_back(ch.h.at(subcarrier));
    CMatrix noise = CMatrix::identity(sc.antennas());
    noise *= sc.config.n0;
    return mmse_streams(sc, user, seen, noise);
}

double mean_capacity(std::span<const double> gamma, std::size_t users, std::size_t streams, std::size_t subcarriers) {
    if (users == 0 || subcarriers == 0) return 0.0;
    if (gamma.size() != users * streams * subcarriers) throw DimensionError("mean_capacity: sample count mismatch");
    double acc = 0.0;
    for (double g : gamma) acc += std::log2(1.0 + g);
    return acc / static_cast<double>(users * subcarriers);
}

std::vector<double> sinr_all(const Scenario& sc, const CMatrix& x, std::size_t r) {
    const std::size_t ns = sc.config.n_s, kk = sc.config.subcarriers;
    std::vector<double> out(sc.users.size() * ns * kk, 0.0);
    for (std::size_t u = 0; u < sc.users.size(); ++u) {
        const CMatrix g = build_projector(x, sc.users[u], r);
        for (std::size_t k = 0; k < kk; ++k) {
            const auto gs = sinr_with_projector(g, sc, u, k);
            for (std::size_t s = 0; s < ns; ++s) out[(u * ns + s) * kk + k] = gs[s];
        }
    }
    return out;
}

SINRReport evaluate(const Scenario& sc, const SystemMatrix& q, const CMatrix& x, const CMatrix& x_exact,
                    std::size_t r) {
    SINRReport rep;
    rep.users = sc.users.size();
    rep.streams = sc.config.n_s;
    rep.subcarriers = sc.config.subcarriers;
    rep.gamma = sinr_all(sc, x, r);
    rep.gamma0 = sinr_all(sc, x_exact, r);
    rep.epsilon = residual_norm(q, x);
    rep.capacity = mean_capacity(rep.gamma, rep.users, rep.streams, rep.subcarriers);
    rep.capacity0 = mean_capacity(rep.gamma0, rep.users, rep.streams, rep.subcarriers);
    return rep;
}

std::vector<BoundRow> check_sinr_bound(const SINRReport& rep) {
    const double e = rep.epsilon;
    std::vector<BoundRow> rows;
    for (std::size_t u = 0; u < rep.users; ++u)
        for (std::size_t s = 0; s < rep.streams; ++s) {
            double mean0 = 0.0;
            for (std::size_t k = 0; k < rep.subcarriers; ++k) mean0 += rep.gamma0[rep.index(u, s, k)];
            mean0 /= static_cast<double>(rep.subcarriers);
            const double denom = (1.0 + e) * (1.0 + e) + 4.0 * e * mean0;
            for (std::size_t k = 0; k < rep.subcarriers; ++k) {
                BoundRow row;
                row.user = u;
                row.stream = s;
                row.subcarrier = k;
                row.epsilon = e;
                row.gamma = rep.gamma[rep.index(u, s, k)];
                row.bound_rhs = rep.gamma0[rep.index(u, s, k)] * (1.0 - e) * (1.0 - e) / denom;
                row.margin = row.gamma - row.bound_rhs;
                row.holds = row.margin >= 0.0;
                rows.push_back(row);
            }
        }
    return rows;
}

std::vector<CapacityRow> capacity_vs_iterations(const Scenario& sc, std::span<const SolveConfig> configs,
                                                std::span<const std::size_t> budgets, std::size_t r) {
    const SystemMatrix q = assemble_q(sc);
    const std::size_t users = sc.users.size(), ns = sc.config.n_s, kk = sc.config.subcarriers;
    auto capacity_of = [&](const CMatrix& x) { return mean_capacity(sinr_all(sc, x, r), users, ns, kk); };
    const std::size_t top = budgets.empty() ? 0 : *std::max_element(budgets.begin(), budgets.end());

    std::vector<CapacityRow> rows;
    for (const auto& base : configs) {
        std::map<std::size_t, double> at;
        at[0] = capacity_of(CMatrix(q.dim(), q.dim()));
        if (top > 0) {
            SolveConfig cfg = base;
            cfg.cg.max_iters = std::min(top, 10 * q.dim());
            cfg.cg.record_trajectory = false;
            auto wanted = [&](std::size_t it) { return std::find(budgets.begin(), budgets.end(), it) != budgets.end(); };
            const SolveResult res = solve(q, cfg, [&](std::size_t it, const CMatrix& x) {
                if (wanted(it)) at[it] = capacity_of(x);
            });
            const double final_cap = at.count(res.iterations()) ? at[res.iterations()] : capacity_of(res.x);
            for (std::size_t b : budgets)
                if (b > res.iterations()) at[b] = final_cap;
        }
        for (std::size_t b : budgets) rows.push_back({base.id, b, at.at(b)});
    }
    return rows;
}

std::vector<CDFPoint> sinr_cdf(std::span<const double> gamma) {
    if (gamma.empty()) throw ValidationError("sinr_cdf: no samples");
    std::vector<double> db(gamma.begin(), gamma.end());
    for (auto& g : db) g = g > 0.0 ? 10.0 * std::log10(g) : -std::numeric_limits<double>::infinity();
    std::sort(db.begin(), db.end());
    std::vector<CDFPoint> out(db.size());
    for (std::size_t i = 0; i < db.size(); ++i)
        out[i] = {db[i], static_cast<double>(i + 1) / static_cast<double>(db.size())};
    return out;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dominates: sample sets differ in size");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    for (std::size_t i = 0; i < sa.size(); ++i)
        if (sa[i] < sb[i]) return false;
    return true;
}

void write_capacity_csv(std::ostream& os, std::span<const CapacityRow> rows) {
    os << "config_id,iters,capacity\n";
    for (const auto& r : rows) os << r.config_id << ',' << r.iters << ',' << fmt_double(r.capacity) << '\n';
}

void write_cdf_csv(std::ostream& os, std::span<const CDFPoint> pts, const std::string& config_id, bool header) {
    if (header) os << "gamma_db,cdf,config_id\n";
    for (const auto& p : pts) os << fmt_double(p.gamma_db) << ',' << fmt_double(p.cdf) << ',' << config_id << '\n';
}

void write_bound_csv(std::ostream& os, std::span<const BoundRow> rows, const std::string& config_id, bool header) {
    if (header) os << "user,epsilon,gamma,bound_rhs,margin,config_id,subcarrier,stream\n";
    for (const auto& r : rows)
        os << r.user << ',' << fmt_double(r.epsilon) << ',' << fmt_double(r.gamma) << ',' << fmt_double(r.bound_rhs)
           << ',' << fmt_double(r.margin) << ',' << config_id << ',' << r.subcarrier << ',' << r.stream << '\n';
}

}  // namespace lrpcg
