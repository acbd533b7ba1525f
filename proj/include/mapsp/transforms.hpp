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

#include "mapsp/types.hpp"

namespace mapsp {

// Unnormalised forward DFT: X[k] = sum_n x[n] exp(-i 2 pi k n / N).
// Uses a radix-2 / mixed-radix fast path; prime lengths fall back to direct evaluation.
CVec dft(std::span<const cplx> v);

// Exact inverse of dft(): x[n] = (1/N) sum_k X[k] exp(+i 2 pi k n / N).
CVec idft(std::span<const cplx> v);

// O(N^2) reference evaluation of dft(). Kept as the oracle for the fast path.
CVec dft_direct(std::span<const cplx> v);

// Dense DFT matrix, [W_N]_{k,n} = exp(-i 2 pi k n / N). The first `cols` columns only if cols < N.
ComplexMatrix dft_matrix(std::size_t n, std::size_t cols);
inline ComplexMatrix dft_matrix(std::size_t n) { return dft_matrix(n, n); }

// ULA array response, [A]_{i,j} = exp(-i 2 pi i (j - M/2) / M) / sqrt(M). Unitary.
ComplexMatrix array_response(std::size_t antennas);

// X * Lambda_N^n: columns cyclically shifted right by <n>_N.
ComplexMatrix cyclic_shift_right(const ComplexMatrix &x, long long n);

// Dense cyclic shift matrix Lambda_N^n (test oracle for cyclic_shift_right).
RealMatrix cyclic_shift_matrix(std::size_t n, long long shift);

// Space-frequency (M x N_c) to angle-delay (M x N_g): H = (1/sqrt(N_c)) A^H G W*_{N_c x N_g}.
ComplexMatrix sf_to_ad(const ComplexMatrix &g, const SystemDims &dims);

// Angle-delay to space-frequency: G = (1/sqrt(N_c)) A H W^T_{N_c x N_g}.
ComplexMatrix ad_to_sf(const ComplexMatrix &h, const SystemDims &dims);

// Zero-pad columns of an M x N_g matrix to M x N_c (the complement-0 extension).
template <typename T>
Matrix<T> zero_pad_columns(const Matrix<T> &m, std::size_t cols)
{
    if (cols < m.cols())
        throw std::invalid_argument("zero_pad_columns: target narrower than source");
    Matrix<T> out(m.rows(), cols);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = m(r, c);
    return out;
}

// Zero-pad to `total` columns, shift right by `shift`, then keep the first `keep` columns.
// This is  X_bar * Lambda^shift * I_{N_c x keep}  without forming any dense matrix.
template <typename T>
Matrix<T> shift_truncate(const Matrix<T> &m, std::size_t total, long long shift, std::size_t keep)
{
    Matrix<T> out(m.rows(), keep);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const std::size_t dst = mod_index(static_cast<long long>(c) + shift, total);
        if (dst >= keep)
            continue;
        for (std::size_t r = 0; r < m.rows(); ++r)
            out(r, dst) = m(r, c);
    }
    return out;
}

} // namespace mapsp
