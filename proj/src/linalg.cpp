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

#include "lrpcg/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lrpcg {

namespace {

// Plain real arithmetic; std::complex operator* goes through the
// NaN-recovering libgcc path, which is much slower in inner loops.
inline void fma_into(cplx& acc, const cplx& a, const cplx& b) {
    const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
    acc = cplx(acc.real() + ar * br - ai * bi, acc.imag() + ar * bi + ai * br);
}

inline void fms_into(cplx& acc, const cplx& a, const cplx& b) {
    const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
    acc = cplx(acc.real() - (ar * br - ai * bi), acc.imag() - (ar * bi + ai * br));
}

inline cplx mul(const cplx& a, const cplx& b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void require_square(const CMatrix& a, const char* who) {
    if (!a.is_square()) throw DimensionError(std::string(who) + ": expected square matrix, got " + shape_string(a));
}

}  // namespace

CMatrix gemm(const CMatrix& a_in, const CMatrix& b_in, Op op_a, Op op_b, FlopCounter* fc) {
    const CMatrix* a = &a_in;
    const CMatrix* b = &b_in;
    CMatrix a_adj, b_adj;
    if (op_a == Op::conj_trans) {
        a_adj = a_in.adjoint();
        a = &a_adj;
    }
    if (op_b == Op::conj_trans) {
        b_adj = b_in.adjoint();
        b = &b_adj;
    }
    if (a->cols() != b->rows()) {
        throw DimensionError("gemm: inner dimensions disagree, op(A) is " + shape_string(*a) + ", op(B) is " +
                             shape_string(*b));
    }
    const std::size_t m = a->rows(), k = a->cols(), n = b->cols();
    CMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        auto crow = c.row(i);
        auto arow = a->row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = arow[p];
            auto brow = b->row(p);
            for (std::size_t j = 0; j < n; ++j) fma_into(crow[j], aip, brow[j]);
        }
    }
    count(fc, "gemm", m * n * k, k ? m * n * (k - 1) : 0);
    return c;
}

CMatrix gram(const CMatrix& a, FlopCounter* fc) {
    const std::size_t n = a.rows(), q = a.cols();
    CMatrix w(q, q);
    for (std::size_t r = 0; r < n; ++r) {
        auto arow = a.row(r);
        for (std::size_t i = 0; i < q; ++i) {
            const cplx ai = std::conj(arow[i]);
            auto wrow = w.row(i);
            for (std::size_t j = i; j < q; ++j) fma_into(wrow[j], ai, arow[j]);
        }
    }
    for (std::size_t i = 0; i < q; ++i) {
        w(i, i) = w(i, i).real();
        for (std::size_t j = i + 1; j < q; ++j) w(j, i) = std::conj(w(i, j));
    }
    const std::uint64_t pairs = q * (q + 1) / 2;
    count(fc, "gram", n * pairs, n ? (n - 1) * pairs : 0);
    return w;
}

CMatrix cholesky(const CMatrix& w, FlopCounter* fc) {
    require_square(w, "cholesky");
    require_hermitian(w, 1e-12, "cholesky");
    const std::size_t n = w.rows();
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += w(i, i).real();
    const double threshold = n ? 1e-14 * tr / static_cast<double>(n) : 0.0;

    CMatrix l(n, n);
    std::uint64_t muls = 0, adds = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = w(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > threshold)) throw NotPositiveDefinite(j, d);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = w(i, j);
            for (std::size_t k = 0; k < j; ++k) fms_into(s, l(i, k), std::conj(l(j, k)));
            l(i, j) = s * inv;
        }
        muls += (n - j - 1) * j;
        adds += (n - j - 1) * j;
    }
    count(fc, "cholesky", muls, adds);
    return l;
}

CMatrix trsm_right_upper_ct(const CMatrix& y, const CMatrix& l, FlopCounter* fc) {
    require_square(l, "trsm_right_upper_ct");
    if (y.cols() != l.rows())
        throw DimensionError("trsm_right_upper_ct: Y is " + shape_string(y) + ", L is " + shape_string(l));
    const std::size_t n = y.rows(), q = l.rows();
    bool real_diag = true;
    for (std::size_t k = 0; k < q; ++k) {
        if (l(k, k) == cplx(0.0)) throw SingularTriangular(k);
        if (l(k, k).imag() != 0.0) real_diag = false;
    }
    CMatrix z(n, q);
    for (std::size_t r = 0; r < n; ++r) {
        auto yrow = y.row(r);
        auto zrow = z.row(r);
        for (std::size_t k = 0; k < q; ++k) {
            cplx s = yrow[k];
            auto lrow = l.row(k);
            for (std::size_t m = 0; m < k; ++m) fms_into(s, std::conj(lrow[m]), zrow[m]);
            zrow[k] = real_diag ? s / l(k, k).real() : s / std::conj(l(k, k));
        }
    }
    const std::uint64_t off = n * (q * (q - 1) / 2);
    count(fc, "trsm", off + (real_diag ? 0 : n * q), off);
    return z;
}

CMatrix trsm_lower(const CMatrix& l, const CMatrix& b, FlopCounter* fc) {
    require_square(l, "trsm_lower");
    if (b.rows() != l.rows()) throw DimensionError("trsm_lower: L is " + shape_string(l) + ", B is " + shape_string(b));
    const std::size_t n = l.rows(), m = b.cols();
    for (std::size_t k = 0; k < n; ++k)
        if (l(k, k) == cplx(0.0)) throw SingularTriangular(k);
    CMatrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        auto xk = x.row(k);
        for (std::size_t p = 0; p < k; ++p) {
            const cplx lkp = l(k, p);
            auto xp = x.row(p);
            for (std::size_t j = 0; j < m; ++j) fms_into(xk[j], lkp, xp[j]);
        }
        const cplx d = l(k, k);
        for (auto& v : xk) v /= d;
    }
    count(fc, "trsm", m * (n * (n - 1) / 2), m * (n * (n - 1) / 2));
    return x;
}

CMatrix trsm_lower_ct(const CMatrix& l, const CMatrix& b, FlopCounter* fc) {
    require_square(l, "trsm_lower_ct");
    if (b.rows() != l.rows())
        throw DimensionError("trsm_lower_ct: L is " + shape_string(l) + ", B is " + shape_string(b));
    const std::size_t n = l.rows(), m = b.cols();
    for (std::size_t k = 0; k < n; ++k)
        if (l(k, k) == cplx(0.0)) throw SingularTriangular(k);
    CMatrix x = b;
    for (std::size_t kk = n; kk-- > 0;) {
        auto xk = x.row(kk);
        for (std::size_t p = kk + 1; p < n; ++p) {
            const cplx u = std::conj(l(p, kk));
            auto xp = x.row(p);
            for (std::size_t j = 0; j < m; ++j) fms_into(xk[j], u, xp[j]);
        }
        const cplx d = std::conj(l(kk, kk));
        for (auto& v : xk) v /= d;
    }
    count(fc, "trsm", m * (n * (n - 1) / 2), m * (n * (n - 1) / 2));
    return x;
}

EigenDecomposition hermitian_evd(const CMatrix& b, FlopCounter* fc) {
    require_square(b, "hermitian_evd");
    require_hermitian(b, 1e-10, "hermitian_evd");
    const std::size_t n = b.rows();
    EigenDecomposition out;
    if (n == 0) return out;
    std::vector<cplx> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (b(i, j) + std::conj(b(j, i)));
    std::vector<double> w(n);
    const lapack_int info = LAPACKE_zheev(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n), a.data(),
                                          static_cast<lapack_int>(n), w.data());
    if (info != 0) throw ConvergenceError("hermitian_evd: zheev failed with info " + std::to_string(info));

    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = n - 1 - k;
        out.values[k] = w[src];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = a[i * n + src];
    }
    // Nominal cost; zheev internals are not instrumented.
    count(fc, "evd", n * n * n, n * n * n);
    return out;
}

EigenDecomposition hermitian_evd_small(const CMatrix& b, FlopCounter* fc) {
    if (b.rows() > 64) throw ValidationError("hermitian_evd_small: dimension " + std::to_string(b.rows()) + " > 64");
    return hermitian_evd(b, fc);
}

EigenDecomposition full_evd_oracle(const CMatrix& q, double tol) {
    require_square(q, "full_evd_oracle");
    require_hermitian(q, 1e-10, "full_evd_oracle");
    const std::size_t n = q.rows();
    if (n > 1024) throw ValidationError("full_evd_oracle: dimension above 1024");

    CMatrix a = hermitian_part(q);
    CMatrix v = CMatrix::identity(n);
    const double scale = fro_norm(a);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = scale == 0.0 || off_norm() <= tol * scale;
    for (int sweep = 0; sweep < 30 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const cplx apr = a(p, r);
                const double g = std::abs(apr);
                if (g == 0.0 || g < 1e-300) continue;
                const cplx e = apr / g;
                const double app = a(p, p).real(), arr = a(r, r).real();
                const double theta = (arr - app) / (2.0 * g);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx ce = std::conj(e);

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * mul(ce, akr);
                    a(k, r) = s * akp + c * mul(ce, akr);
                    const cplx vkp = v(k, p), vkr = v(k, r);
                    v(k, p) = c * vkp - s * mul(ce, vkr);
                    v(k, r) = s * vkp + c * mul(ce, vkr);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx mpk = a(p, k), mrk = a(r, k);
                    a(p, k) = c * mpk - s * mul(e, mrk);
                    a(r, k) = s * mpk + c * mul(e, mrk);
                }
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(r, r) = a(r, r).real();
            }
        }
        converged = off_norm() <= tol * scale;
    }
    if (!converged) throw ConvergenceError("full_evd_oracle: no convergence within 30 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

CMatrix direct_inverse_oracle(const CMatrix& q, FlopCounter* fc) {
    const CMatrix l = cholesky(q, fc);
    const CMatrix y = trsm_lower(l, CMatrix::identity(q.rows()), fc);
    return trsm_lower_ct(l, y, fc);
}

double fro_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

cplx trace(const CMatrix& a) {
    require_square(a, "trace");
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double hermitian_deviation(const CMatrix& a) {
    require_square(a, "hermitian_deviation");
    const double nrm = fro_norm(a);
    if (nrm == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
    return std::sqrt(s) / nrm;
}

void require_hermitian(const CMatrix& a, double rel_tol, const char* who) {
    require_square(a, who);
    const double dev = hermitian_deviation(a);
    if (dev > rel_tol)
        throw ValidationError(std::string(who) + ": input is not Hermitian (relative deviation " +
                              std::to_string(dev) + ")");
}

CMatrix hermitian_part(const CMatrix& a) {
    require_square(a, "hermitian_part");
    CMatrix h(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        h(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

double orthonormality_error(const CMatrix& q) {
    CMatrix w = gemm(q, q, Op::conj_trans, Op::none);
    for (std::size_t i = 0; i < w.rows(); ++i) w(i, i) -= 1.0;
    return fro_norm(w);
}

double max_principal_angle(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("max_principal_angle: " + shape_string(a) + " vs " + shape_string(b));
    // Residual of B after projecting onto span(A); its largest singular value is sin(theta_max).
    CMatrix e = b - gemm(a, gemm(a, b, Op::conj_trans, Op::none));
    const auto ev = hermitian_evd(gram(e));
    const double s2 = ev.values.empty() ? 0.0 : std::max(ev.values.front(), 0.0);
    return std::asin(std::min(1.0, std::sqrt(s2)));
}

double condition_number(const std::vector<double>& eigs) {
    if (eigs.empty()) throw ValidationError("condition_number: empty spectrum");
    return eigs.front() / eigs.back();
}

}  // namespace lrpcg
