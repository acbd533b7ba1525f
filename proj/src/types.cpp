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

#include "mapsp/types.hpp"

#include <algorithm>
#include <cmath>

namespace mapsp {

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{})
                continue;
            auto src = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                dst[j] += aik * src[j];
        }
    }
    return out;
}

ComplexMatrix conj_transpose(const ComplexMatrix &a)
{
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix identity(std::size_t n)
{
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        out(i, i) = 1.0;
    return out;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: length mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (!a.same_shape(b))
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(const RealMatrix &a, const RealMatrix &b)
{
    if (!a.same_shape(b))
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double frobenius_sq(const ComplexMatrix &a)
{
    double s = 0.0;
    for (const auto &v : a.data())
        s += std::norm(v);
    return s;
}

double sum(const RealMatrix &a)
{
    double s = 0.0;
    for (double v : a.data())
        s += v;
    return s;
}

RealMatrix abs_sq(const ComplexMatrix &a)
{
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data()[i] = std::norm(a.data()[i]);
    return out;
}

} // namespace mapsp
