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

#include "mapsp/transforms.hpp"

#include <cmath>
#include <unordered_map>

namespace mapsp {

namespace {

// exp(-i 2 pi k / n) for k = 0..n-1. The angle is formed from the exact integer k.
const CVec &twiddles(std::size_t n)
{
    thread_local std::unordered_map<std::size_t, CVec> cache;
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    CVec tw(n);
    for (std::size_t k = 0; k < n; ++k)
        tw[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    return cache.emplace(n, std::move(tw)).first->second;
}

std::size_t smallest_factor(std::size_t n)
{
    if (n % 2 == 0)
        return 2;
    for (std::size_t p = 3; p * p <= n; p += 2)
        if (n % p == 0)
            return p;
    return n;
}

// Decimation in time by the smallest prime factor. `tw` is the table of the top-level length;
// tw_stride maps the current length n onto it (tw_stride * n == tw.size()).
void fft_rec(const cplx *in, std::size_t stride, cplx *out, std::size_t n, const CVec &tw,
             std::size_t tw_stride)
{
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    const std::size_t p = smallest_factor(n);
    if (p == n) {
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc{};
            for (std::size_t j = 0; j < n; ++j)
                acc += in[j * stride] * tw[((j * k) % n) * tw_stride];
            out[k] = acc;
        }
        return;
    }
    const std::size_t m = n / p;
    CVec sub(n);
    for (std::size_t r = 0; r < p; ++r)
        fft_rec(in + r * stride, stride * p, sub.data() + r * m, m, tw, tw_stride * p);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = sub[k % m];
        for (std::size_t r = 1; r < p; ++r)
            acc += tw[((r * k) % n) * tw_stride] * sub[r * m + (k % m)];
        out[k] = acc;
    }
}

void require_nonempty(std::span<const cplx> v, const char *what)
{
    if (v.empty())
        throw std::invalid_argument(std::string(what) + ": empty input");
}

} // namespace

CVec dft(std::span<const cplx> v)
{
    require_nonempty(v, "dft");
    CVec out(v.size());
    fft_rec(v.data(), 1, out.data(), v.size(), twiddles(v.size()), 1);
    return out;
}

CVec idft(std::span<const cplx> v)
{
    require_nonempty(v, "idft");
    CVec tmp(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        tmp[i] = std::conj(v[i]);
    CVec out = dft(tmp);
    const double inv = 1.0 / static_cast<double>(v.size());
    for (auto &x : out)
        x = std::conj(x) * inv;
    return out;
}

CVec dft_direct(std::span<const cplx> v)
{
    require_nonempty(v, "dft_direct");
    const std::size_t n = v.size();
    CVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            acc += v[j] * std::polar(1.0, ang);
        }
        out[k] = acc;
    }
    return out;
}

ComplexMatrix dft_matrix(std::size_t n, std::size_t cols)
{
    if (n == 0 || cols > n)
        throw std::invalid_argument("dft_matrix: require 0 < cols <= n");
    ComplexMatrix w(n, cols);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < cols; ++c)
            w(k, c) = std::polar(1.0, -2.0 * kPi * static_cast<double>((k * c) % n) / static_cast<double>(n));
    return w;
}

ComplexMatrix array_response(std::size_t antennas)
{
    if (antennas < 1)
        throw std::invalid_argument("array_response: antenna count must be >= 1");
    const auto m = static_cast<long long>(antennas);
    const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
    ComplexMatrix a(antennas, antennas);
    // exp(-i 2 pi i (j - M/2) / M) = exp(-i pi i (2j - M) / M); the integer product is reduced mod 2M.
    for (long long i = 0; i < m; ++i)
        for (long long j = 0; j < m; ++j) {
            const auto k = mod_index(i * (2 * j - m), static_cast<std::size_t>(2 * m));
            a(i, j) = std::polar(scale, -kPi * static_cast<double>(k) / static_cast<double>(m));
        }
    return a;
}

ComplexMatrix cyclic_shift_right(const ComplexMatrix &x, long long n)
{
    ComplexMatrix out(x.rows(), x.cols());
    if (x.cols() == 0)
        return out;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const std::size_t dst = mod_index(static_cast<long long>(c) + n, x.cols());
        for (std::size_t r = 0; r < x.rows(); ++r)
            out(r, dst) = x(r, c);
    }
    return out;
}

RealMatrix cyclic_shift_matrix(std::size_t n, long long shift)
{
    // [[0, I_{N-s}], [I_s, 0]] with s = <shift>_N, i.e. a one at (i, <i + shift>_N).
    RealMatrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i)
        lam(i, mod_index(static_cast<long long>(i) + shift, n)) = 1.0;
    return lam;
}

ComplexMatrix sf_to_ad(const ComplexMatrix &g, const SystemDims &dims)
{
    dims.validate();
    if (g.rows() != dims.antennas || g.cols() != dims.subcarriers)
        throw std::invalid_argument("sf_to_ad: expected an M x N_c matrix");
    const ComplexMatrix b = matmul(conj_transpose(array_response(dims.antennas)), g);
    // [B W*]_{m,j} = sum_n B_{m,n} exp(+i 2 pi n j / N_c) = N_c * idft(B_m)[j]
    const double scale = std::sqrt(static_cast<double>(dims.subcarriers));
    ComplexMatrix h(dims.antennas, dims.cp_length);
    for (std::size_t m = 0; m < dims.antennas; ++m) {
        const CVec t = idft(b.row(m));
        for (std::size_t j = 0; j < dims.cp_length; ++j)
            h(m, j) = t[j] * scale;
    }
    return h;
}

ComplexMatrix ad_to_sf(const ComplexMatrix &h, const SystemDims &dims)
{
    dims.validate();
    if (h.rows() != dims.antennas || h.cols() != dims.cp_length)
        throw std::invalid_argument("ad_to_sf: expected an M x N_g matrix");
    const ComplexMatrix b = matmul(array_response(dims.antennas), h);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.subcarriers));
    ComplexMatrix g(dims.antennas, dims.subcarriers);
    CVec padded(dims.subcarriers);
    for (std::size_t m = 0; m < dims.antennas; ++m) {
        std::fill(padded.begin(), padded.end(), cplx{});
        for (std::size_t j = 0; j < dims.cp_length; ++j)
            padded[j] = b(m, j);
        const CVec t = dft(padded);
        for (std::size_t n = 0; n < dims.subcarriers; ++n)
            g(m, n) = t[n] * scale;
    }
    return g;
}

} // namespace mapsp
