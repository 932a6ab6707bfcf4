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

#include "lrpcg/cg.hpp"

#include <cmath>
#include <ostream>

#include "lrpcg/format.hpp"
#include "lrpcg/linalg.hpp"

namespace lrpcg {

NumericalBreakdown::NumericalBreakdown(std::size_t it, const std::string& what)
    : Error("cg: numerical breakdown at iteration " + std::to_string(it) + ": " + what), iteration(it) {}

namespace {

// Column-wise a_j^H b_j, accumulated row by row in a fixed order.
std::vector<cplx> column_dots(const CMatrix& a, const CMatrix& b) {
    std::vector<cplx> out(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        auto br = b.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += std::conj(ar[j]) * br[j];
    }
    return out;
}

CMatrix identity_minus(CMatrix qx) {
    for (auto& z : qx.data()) z = -z;
    for (std::size_t i = 0; i < qx.rows(); ++i) qx(i, i) += 1.0;
    return qx;
}

}  // namespace

CGState cg_inverse(const SystemMatrix& q, const LowRankPreconditioner* m, const CGConfig& cfg, FlopCounter* fc,
                   const CGObserver& observer) {
    const std::size_t n = q.dim();
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ValidationError("cg: epsilon must lie in (0, 1)");
    if (cfg.max_iters > 10 * n) throw ValidationError("cg: max_iters exceeds 10 N");
    if (m && m->dim() != n) throw DimensionError("cg: preconditioner dimension does not match Q");

    const CMatrix& qm = q.matrix();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    auto precondition = [&](const CMatrix& r) { return m ? m->apply(r, fc) : r; };

    CGState st;
    st.x = CMatrix(n, n);
    st.r = CMatrix::identity(n);
    st.z = precondition(st.r);
    st.p = st.z;
    st.alpha.assign(n, 0.0);
    st.beta.assign(n, 0.0);
    st.frozen.assign(n, false);
    std::vector<cplx> rz = column_dots(st.r, st.z);

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        st.s = gemm(qm, st.p, Op::none, Op::none, fc);
        const std::vector<cplx> ps = column_dots(st.p, st.s);
        for (std::size_t j = 0; j < n; ++j) {
            if (!st.frozen[j] && std::abs(ps[j]) < 1e-300) st.frozen[j] = true;
            st.alpha[j] = st.frozen[j] ? cplx(0.0) : rz[j] / ps[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto xr = st.x.row(i);
            auto pr = st.p.row(i);
            for (std::size_t j = 0; j < n; ++j) xr[j] += pr[j] * st.alpha[j];
        }

        st.r = identity_minus(gemm(qm, st.x, Op::none, Op::none, fc));
        const double res = fro_norm(st.r) / sqrt_n;
        st.iter = it + 1;
        if (!std::isfinite(res) || !st.x.all_finite()) throw NumericalBreakdown(st.iter, "non-finite iterate");
        if (cfg.record_trajectory) st.residual_history.push_back(res);
        if (observer) observer(st.iter, st.x);
        if (res < cfg.epsilon) {
            st.converged = true;
            break;
        }

        st.z = precondition(st.r);
        std::vector<cplx> rz_next = column_dots(st.r, st.z);
        for (std::size_t j = 0; j < n; ++j) {
            if (!st.frozen[j] && std::abs(rz[j]) == 0.0) st.frozen[j] = true;
            st.beta[j] = st.frozen[j] ? cplx(0.0) : rz_next[j] / rz[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            auto pr = st.p.row(i);
            auto zr = st.z.row(i);
            for (std::size_t j = 0; j < n; ++j) pr[j] = zr[j] + pr[j] * st.beta[j];
        }
        rz = std::move(rz_next);
    }
    return st;
}

double residual_norm(const CMatrix& q, const CMatrix& x) {
    if (!q.is_square() || x.rows() != q.rows() || x.cols() != q.cols())
        throw DimensionError("residual_norm: Q is " + shape_string(q) + ", X is " + shape_string(x));
    return fro_norm(identity_minus(gemm(q, x))) / std::sqrt(static_cast<double>(q.rows()));
}

double residual_norm(const SystemMatrix& q, const CMatrix& x) { return residual_norm(q.matrix(), x); }

double iteration_bound_estimate(double kappa, double epsilon) {
    if (kappa < 1.0) throw ValidationError("iteration_bound_estimate: kappa must be >= 1");
    if (!(epsilon > 0.0)) throw ValidationError("iteration_bound_estimate: epsilon must be positive");
    return std::sqrt(kappa) * std::log(2.0 / epsilon) / 2.0;
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& history, std::string_view config_id,
                          bool header) {
    if (header) os << "iter,residual,config_id\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        os << (i + 1) << ',' << fmt_double(history[i]) << ',' << config_id << '\n';
}

}  // namespace lrpcg
