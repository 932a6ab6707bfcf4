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

#include "lrpcg/beamspace.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <mutex>
#include <numbers>

#include "lrpcg/linalg.hpp"

namespace lrpcg {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

enum class Axis { columns, rows };

// In-place 2-D DFT (T x T) of every column or every row of an N x N
// row-major matrix. sign is FFTW_FORWARD or FFTW_BACKWARD; the result is
// scaled by 1/T so that each transform is unitary.
void batched_dft2(CMatrix& m, std::size_t side, Axis axis, int sign) {
    const int t = static_cast<int>(side);
    const int n = t * t;
    const int dims[2] = {t, t};
    auto* buf = reinterpret_cast<fftw_complex*>(m.data().data());
    const int stride = axis == Axis::columns ? n : 1;
    const int dist = axis == Axis::columns ? 1 : n;

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(2, dims, n, buf, nullptr, stride, dist, buf, nullptr, stride, dist, sign,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(side);
    for (auto& z : m.data()) z *= scale;
}

void require_dim(const BeamspaceOperator& op, const CMatrix& x, const char* who) {
    if (x.rows() != op.dim() || x.cols() != op.dim())
        throw DimensionError(std::string(who) + ": matrix " + shape_string(x) + " does not match operator of size " +
                             std::to_string(op.dim()));
}

void count_fft(FlopCounter* fc, std::size_t n) {
    // Nominal radix-2 cost: two batches of N transforms of length N,
    // (N/2) log2 N multiplies each.
    const auto lg = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
    count(fc, "beamspace.fft", n * n * lg, 2 * n * n * lg);
}

}  // namespace

BeamspaceOperator::BeamspaceOperator(std::size_t side) : side_(side) {
    if (side == 0) throw ValidationError("BeamspaceOperator: side length must be >= 1");
    f_x_ = CMatrix(side, side);
    const double norm = 1.0 / std::sqrt(static_cast<double>(side));
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t k = 0; k < side; ++k) {
            // Reduce jk mod T first so the angle stays exact for large products.
            const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % side) / static_cast<double>(side);
            f_x_(j, k) = norm * cplx(std::cos(ang), std::sin(ang));
        }
    f_y_ = f_x_;
    f_ = kron(f_x_, f_y_);
}

BeamspaceOperator build_operator(std::size_t side) { return BeamspaceOperator(side); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

CMatrix to_beamspace(const BeamspaceOperator& op, const CMatrix& x, TransformMethod method, FlopCounter* fc) {
    require_dim(op, x, "to_beamspace");
    if (method == TransformMethod::dense) {
        FlopCounter local;
        CMatrix out = gemm(gemm(op.f(), x, Op::none, Op::none, &local), op.f(), Op::none, Op::conj_trans, &local);
        if (fc) fc->merge(local, "beamspace.");
        return out;
    }
    CMatrix out = x;
    batched_dft2(out, op.side(), Axis::columns, FFTW_FORWARD);
    batched_dft2(out, op.side(), Axis::rows, FFTW_BACKWARD);
    count_fft(fc, op.dim());
    return out;
}

SystemMatrix to_beamspace(const BeamspaceOperator& op, const SystemMatrix& q, TransformMethod method,
                          FlopCounter* fc) {
    if (q.domain() != Domain::antenna) throw ValidationError("to_beamspace: system matrix is already in beamspace");
    return SystemMatrix(hermitian_part(to_beamspace(op, q.matrix(), method, fc)), Domain::beamspace);
}

CMatrix from_beamspace(const BeamspaceOperator& op, const CMatrix& xb, TransformMethod method, FlopCounter* fc) {
    require_dim(op, xb, "from_beamspace");
    if (method == TransformMethod::dense) {
        FlopCounter local;
        CMatrix out = gemm(gemm(op.f(), xb, Op::conj_trans, Op::none, &local), op.f(), Op::none, Op::none, &local);
        if (fc) fc->merge(local, "beamspace.");
        return out;
    }
    CMatrix out = xb;
    batched_dft2(out, op.side(), Axis::columns, FFTW_BACKWARD);
    batched_dft2(out, op.side(), Axis::rows, FFTW_FORWARD);
    count_fft(fc, op.dim());
    return out;
}

double sparsity_ratio(const CMatrix& a, double threshold) {
    if (a.empty()) return 1.0;
    double peak = 0.0;
    for (const auto& z : a.data()) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) return 1.0;
    const double cut = threshold * peak;
    std::size_t small = 0;
    for (const auto& z : a.data())
        if (std::abs(z) < cut) ++small;
    return static_cast<double>(small) / static_cast<double>(a.size());
}

}  // namespace lrpcg
