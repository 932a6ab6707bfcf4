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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrpcg {

using cplx = std::complex<double>;

// ------------------------------------------------------------------------
// Error types
// ------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

// Cholesky pivot fell below the breakdown threshold.
struct NotPositiveDefinite : Error {
    NotPositiveDefinite(std::size_t pivot, double value);
    std::size_t pivot;
    double value;
};

struct SingularTriangular : Error {
    explicit SingularTriangular(std::size_t index);
    std::size_t index;
};

struct ConvergenceError : Error {
    using Error::Error;
};

// ------------------------------------------------------------------------
// Dense complex matrix, row-major.
// ------------------------------------------------------------------------

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    // Throws ValidationError on size mismatch or non-finite entries.
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    CMatrix column(std::size_t j) const { return block(0, j, rows_, 1); }
    bool all_finite() const noexcept;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(cplx s);

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);

std::string shape_string(const CMatrix& m);

// ------------------------------------------------------------------------
// Operation counter. Counts complex x complex products and complex
// additions; scaling by a real number is not a complex multiply.
// ------------------------------------------------------------------------

struct OpCount {
    std::uint64_t mul = 0;
    std::uint64_t add = 0;

    OpCount& operator+=(const OpCount& o) {
        mul += o.mul;
        add += o.add;
        return *this;
    }
};

class FlopCounter {
public:
    void add(std::string_view kernel, std::uint64_t mul, std::uint64_t add);
    // Folds another context in; kernel names are prefixed with `prefix`.
    void merge(const FlopCounter& other, std::string_view prefix = {});

    std::uint64_t multiplies() const noexcept { return total_.mul; }
    std::uint64_t additions() const noexcept { return total_.add; }
    const std::map<std::string, OpCount, std::less<>>& breakdown() const noexcept { return by_kernel_; }
    // Sum of all kernels whose name starts with `prefix`.
    OpCount sum_prefix(std::string_view prefix) const;

private:
    OpCount total_;
    std::map<std::string, OpCount, std::less<>> by_kernel_;
};

inline void count(FlopCounter* fc, std::string_view kernel, std::uint64_t mul, std::uint64_t add) {
    if (fc) fc->add(kernel, mul, add);
}

}  // namespace lrpcg
