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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mapsp/transforms.hpp"
#include "test_util.hpp"

using namespace mapsp;
using mapsp::testing::random_matrix;
using mapsp::testing::random_vector;

TEST_CASE("fft agrees with the direct sum for composite and prime lengths")
{
    Rng rng = derive_rng(1, {});
    for (std::size_t n : {1u, 2u, 3u, 8u, 12u, 30u, 97u, 128u, 210u, 2048u}) {
        const CVec v = random_vector(n, rng);
        CHECK(max_abs_diff(dft(v), dft_direct(v)) < 1e-9 * std::sqrt(static_cast<double>(n)));
        CHECK(max_abs_diff(idft(dft(v)), v) < 1e-10);
    }
}

TEST_CASE("dft of a unit impulse is flat and of a tone is an impulse")
{
    CVec e(16);
    e[0] = 1.0;
    for (const auto &x : dft(e))
        CHECK(std::abs(x - cplx(1.0)) < 1e-12);
    CVec tone(16);
    for (std::size_t n = 0; n < 16; ++n)
        tone[n] = std::polar(1.0, 2.0 * kPi * 3.0 * static_cast<double>(n) / 16.0);
    const CVec f = dft(tone);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(std::abs(f[k]) == doctest::Approx(k == 3 ? 16.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("dft_matrix matches the transform applied to unit vectors")
{
    const ComplexMatrix w = dft_matrix(12, 5);
    CHECK(w.rows() == 12);
    CHECK(w.cols() == 5);
    for (std::size_t c = 0; c < 5; ++c) {
        CVec e(12);
        e[c] = 1.0;
        const CVec col = dft(e);
        for (std::size_t r = 0; r < 12; ++r)
            CHECK(std::abs(w(r, c) - col[r]) < 1e-12);
    }
}

TEST_CASE("array response is unitary and has the documented entries")
{
    for (std::size_t m : {1u, 4u, 7u, 16u}) {
        const ComplexMatrix a = array_response(m);
        CHECK(max_abs_diff(matmul(conj_transpose(a), a), identity(m)) < 1e-12);
    }
    const ComplexMatrix a = array_response(4);
    // (1/sqrt M) exp(-i pi i (2j - M) / M)
    CHECK(std::abs(a(1, 3) - std::polar(0.5, -kPi * 1.0 * 2.0 / 4.0)) < 1e-12);
    CHECK(std::abs(a(2, 0) - std::polar(0.5, -kPi * 2.0 * -4.0 / 4.0)) < 1e-12);
}

TEST_CASE("cyclic shift helpers agree with the permutation matrix")
{
    Rng rng = derive_rng(2, {});
    const ComplexMatrix x = random_matrix(3, 10, rng);
    for (long long s : {-13LL, -1LL, 0LL, 4LL, 10LL}) {
        const ComplexMatrix y = cyclic_shift_right(x, s);
        const RealMatrix pm = cyclic_shift_matrix(10, s);
        ComplexMatrix pc(10, 10);
        for (std::size_t i = 0; i < pm.size(); ++i)
            pc.data()[i] = pm.data()[i];
        CHECK(max_abs_diff(y, matmul(x, pc)) < 1e-14);
        for (std::size_t c = 0; c < 10; ++c)
            CHECK(y(1, mod_index(static_cast<long long>(c) + s, 10)) == x(1, c));
    }
}

TEST_CASE("shift_truncate keeps only the captured columns")
{
    RealMatrix m(1, 4);
    for (std::size_t c = 0; c < 4; ++c)
        m(0, c) = static_cast<double>(c + 1);
    const RealMatrix t = shift_truncate(m, 10, 8, 3);
    // columns land at 8, 9, 0, 1; the first two fall outside the window
    CHECK(t(0, 0) == 3.0);
    CHECK(t(0, 1) == 4.0);
    CHECK(t(0, 2) == 0.0);
    CHECK_THROWS_AS(zero_pad_columns(m, 2), std::invalid_argument);
}

TEST_CASE("angle-delay transform matches the dense matrix formula")
{
    Rng rng = derive_rng(3, {});
    const SystemDims d{6, 24, 5};
    const ComplexMatrix g = random_matrix(6, 24, rng);
    const ComplexMatrix a = array_response(6);
    const ComplexMatrix w = dft_matrix(24, 5);
    // H = A^H G W* / sqrt(N_c) restricted to N_g columns
    ComplexMatrix wc = w;
    for (auto &v : wc.data())
        v = std::conj(v);
    ComplexMatrix h = matmul(matmul(conj_transpose(a), g), wc);
    h *= cplx(1.0 / std::sqrt(24.0));
    CHECK(max_abs_diff(sf_to_ad(g, d), h) < 1e-10);
}

TEST_CASE("space-frequency synthesis inverts the angle-delay transform")
{
    Rng rng = derive_rng(4, {});
    const SystemDims d{8, 32, 6};
    const ComplexMatrix h = random_matrix(8, 6, rng);
    const ComplexMatrix g = ad_to_sf(h, d);
    CHECK(g.rows() == 8);
    CHECK(g.cols() == 32);
    CHECK(max_abs_diff(sf_to_ad(g, d), h) < 1e-10);
    // energy is preserved: unitary in space, Parseval in frequency
    CHECK(frobenius_sq(g) == doctest::Approx(frobenius_sq(h)).epsilon(1e-10));
}

TEST_CASE("transforms reject inconsistent shapes")
{
    const SystemDims d{4, 16, 4};
    CHECK_THROWS_AS(sf_to_ad(ComplexMatrix(3, 16), d), std::invalid_argument);
    CHECK_THROWS_AS(ad_to_sf(ComplexMatrix(4, 5), d), std::invalid_argument);
    CHECK_THROWS_AS(SystemDims({4, 8, 9}).validate(), std::invalid_argument);
}
