// SPDX-License-Identifier: Apache-2.0
//
// mapsp - multi-group adjustable phase shift pilot simulator
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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapsp {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Non-negative remainder of a modulo b (b > 0).
inline std::size_t mod_index(long long a, std::size_t b)
{
    const long long m = static_cast<long long>(b);
    long long r = a % m;
    if (r < 0)
        r += m;
    return static_cast<std::size_t>(r);
}

/// Antenna count, subcarrier count and cyclic-prefix length.
struct SystemDims
{
    std::size_t antennas = 0;    // M
    std::size_t subcarriers = 0; // N_c
    std::size_t cp_length = 0;   // N_g

    void validate() const
    {
        if (antennas < 1)
            throw std::invalid_argument("SystemDims: antenna count must be >= 1");
        if (cp_length < 1 || cp_length > subcarriers)
            throw std::invalid_argument("SystemDims: require 1 <= N_g <= N_c");
    }
};

// Dense row-major matrix. Entries are addressed (row, col) with zero-based indices.
template <typename T>
class Matrix
{
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    bool same_shape(const Matrix &o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

    Matrix &operator+=(const Matrix &o)
    {
        require_same_shape(o, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }

    Matrix &operator-=(const Matrix &o)
    {
        require_same_shape(o, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }

    Matrix &operator*=(T s)
    {
        for (auto &v : data_)
            v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }

  private:
    void require_same_shape(const Matrix &o, const char *what) const
    {
        if (!same_shape(o))
            throw std::invalid_argument(std::string("Matrix::") + what + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix conj_transpose(const ComplexMatrix &a);
ComplexMatrix identity(std::size_t n);

// Largest |a - b| over all entries. Shapes must agree.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_diff(const RealMatrix &a, const RealMatrix &b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

double frobenius_sq(const ComplexMatrix &a);
double sum(const RealMatrix &a);

// Elementwise |a|^2.
RealMatrix abs_sq(const ComplexMatrix &a);

} // namespace mapsp
