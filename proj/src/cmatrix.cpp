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

#include "lrpcg/cmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace lrpcg {

NotPositiveDefinite::NotPositiveDefinite(std::size_t p, double v)
    : Error("cholesky: matrix is indefinite/rank-deficient at pivot " + std::to_string(p) +
            " (pivot value " + std::to_string(v) + ")"),
      pivot(p),
      value(v) {}

SingularTriangular::SingularTriangular(std::size_t i)
    : Error("triangular solve: zero diagonal entry at index " + std::to_string(i)), index(i) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError("CMatrix: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                              " needs " + std::to_string(rows_ * cols_) + " entries, got " +
                              std::to_string(data_.size()));
    }
    if (!all_finite()) throw ValidationError("CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ValidationError("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!all_finite()) throw ValidationError("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range for " + shape_string(*this));
    CMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((r0 + i) * cols_ + c0), nc, out.row(i).begin());
    return out;
}

bool CMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("add: " + shape_string(*this) + " vs " + shape_string(other));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("subtract: " + shape_string(*this) + " vs " + shape_string(other));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

std::string shape_string(const CMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void FlopCounter::add(std::string_view kernel, std::uint64_t mul, std::uint64_t add) {
    OpCount c{mul, add};
    total_ += c;
    auto it = by_kernel_.find(kernel);
    if (it == by_kernel_.end()) it = by_kernel_.emplace(std::string(kernel), OpCount{}).first;
    it->second += c;
}

void FlopCounter::merge(const FlopCounter& other, std::string_view prefix) {
    for (const auto& [name, c] : other.by_kernel_) add(std::string(prefix) + name, c.mul, c.add);
}

OpCount FlopCounter::sum_prefix(std::string_view prefix) const {
    OpCount out;
    for (const auto& [name, c] : by_kernel_)
        if (std::string_view(name).starts_with(prefix)) out += c;
    return out;
}

}  // namespace lrpcg
