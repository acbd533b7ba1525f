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
#include "mapsp/uplink.hpp"
#include "test_util.hpp"

using namespace mapsp;
using mapsp::testing::random_matrix;
using mapsp::testing::random_unit;

TEST_CASE("pilot book caches every ordered pair")
{
    const PilotBook book = make_zc_book(3, 30, 1, ZcVariant::ModN);
    CHECK(book.groups() == 3);
    CHECK(book.basic(1).shift == 10);
    const Adpcm &z = book.pair(2, 1);
    CHECK(max_abs_diff(z.first_col, adpcm_brute(sfpcm_diagonal(book.basic(2), book.basic(1), 0, 0)).first_col) <
          1e-12);
    CHECK_THROWS_AS(book.pair(3, 0), std::out_of_range);
    CHECK_THROWS_AS(PilotBook({zc_sequence(8, 1, 0), zc_sequence(9, 1, 0)}), std::invalid_argument);
}

TEST_CASE("single UT without noise is recovered exactly")
{
    Rng rng = derive_rng(13, {});
    const SystemDims d{6, 32, 5};
    const PilotBook book = make_zc_book(1, 32, 1, ZcVariant::Standard);
    UplinkScene s{d, &book, {random_matrix(6, 5, rng)}, {{0, 11, 2.5}}, 0.0};
    const ComplexMatrix y = synthesize_received(s, rng);
    CHECK(max_abs_diff(ls_decorrelate(y, s.assignments[0], book.basic(0), d), s.channels[0]) < 1e-10);
}

TEST_CASE("received signal matches the dense space-frequency model")
{
    Rng rng = derive_rng(14, {});
    const SystemDims d{4, 16, 3};
    const PilotBook book = make_zc_book(2, 16, 1, ZcVariant::Standard);
    UplinkScene s{d, &book, {random_matrix(4, 3, rng), random_matrix(4, 3, rng)}, {{0, 2, 1.0}, {1, 5, 0.5}}, 0.0};
    const ComplexMatrix y = synthesize_received(s, rng);
    // Y = sum_k A H_k W^T diag(x_k) / sqrt(N_c), with W the N_c x N_g DFT block
    const ComplexMatrix a = array_response(4);
    const ComplexMatrix w = dft_matrix(16, 3);
    ComplexMatrix ref(4, 16);
    for (std::size_t k = 0; k < 2; ++k) {
        ComplexMatrix wt(3, 16);
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t n = 0; n < 16; ++n)
                wt(j, n) = w(n, j);
        ComplexMatrix g = matmul(matmul(a, s.channels[k]), wt);
        const CVec x = pilot_frequency_signal(s.assignments[k], book.basic(s.assignments[k].group));
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = 0; n < 16; ++n)
                ref(m, n) += g(m, n) * x[n] / 4.0;
    }
    CHECK(max_abs_diff(y, ref) < 1e-10);
}

TEST_CASE("intra-group interference equals the dense phase-shift operator")
{
    Rng rng = derive_rng(15, {});
    const SystemDims d{3, 20, 6};
    const ComplexMatrix h = random_matrix(3, 6, rng);
    for (long long delta : {-7LL, -1LL, 0LL, 3LL, 17LL})
        CHECK(max_abs_diff(intra_interference(h, delta, d), intra_interference_dense(h, delta, d)) < 1e-10);
}

TEST_CASE("inter-group interference equals the dense operator for general and structured ADPCMs")
{
    Rng rng = derive_rng(16, {});
    const SystemDims d{3, 24, 5};
    const ComplexMatrix h = random_matrix(3, 5, rng);
    const CVec general = random_unit(24, rng);
    const CVec structured = sfpcm_diagonal(zc_sequence(24, 1, 7, ZcVariant::Standard),
                                           zc_sequence(24, 1, 0, ZcVariant::Standard), 0, 0);
    for (const CVec *diag : {&general, &structured}) {
        const Adpcm fast = adpcm_fast(*diag);
        const Adpcm brute = adpcm_brute(*diag);
        for (long long delta : {-5LL, 0LL, 2LL, 13LL})
            CHECK(max_abs_diff(inter_interference(h, fast, delta, d), inter_interference_dense(h, brute, delta, d)) <
                  1e-10);
    }
    CHECK(adpcm_fast(structured).structure == AdpcmStructure::CyclicShiftScaled);
    CHECK(adpcm_fast(general).structure == AdpcmStructure::GeneralToeplitz);
}

TEST_CASE("decorrelated signal decomposes into own, intra and inter terms")
{
    Rng rng = derive_rng(17, {});
    const SystemDims d{4, 32, 4};
    for (auto variant : {ZcVariant::Standard, ZcVariant::ModN}) {
        const PilotBook book = make_zc_book(3, 32, 1, variant);
        UplinkScene s;
        s.dims = d;
        s.book = &book;
        for (std::size_t k = 0; k < 6; ++k) {
            s.channels.push_back(random_matrix(4, 4, rng));
            s.assignments.push_back({k % 3, (7 * k) % 32, 0.5 + 0.25 * static_cast<double>(k)});
        }
        const ComplexMatrix y = synthesize_received(s, rng);
        for (std::size_t t = 0; t < 6; ++t) {
            const auto &a = s.assignments[t];
            const Decomposition dec = decompose(s, t);
            CHECK(max_abs_diff(ls_decorrelate(y, a, book.basic(a.group), d), dec.own + dec.intra + dec.inter) <
                  1e-9);
        }
    }
}

TEST_CASE("interference power is the expected squared magnitude")
{
    Rng rng = derive_rng(18, {});
    const SystemDims d{2, 16, 4};
    RealMatrix p(2, 4);
    for (auto &v : p.data())
        v = uniform(rng, 0.1, 2.0);
    const Adpcm z = adpcm_fast(random_unit(16, rng));
    const long long delta = 3;
    // random phases per element make cross terms vanish on average
    RealMatrix acc(2, 4);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        ComplexMatrix h(2, 4);
        for (std::size_t i = 0; i < h.size(); ++i)
            h.data()[i] = std::polar(std::sqrt(p.data()[i]), uniform(rng, -kPi, kPi));
        acc += abs_sq(inter_interference(h, z, delta, d));
    }
    acc *= 1.0 / trials;
    const RealMatrix ip = interference_power(p, delta, &z, d);
    for (std::size_t i = 0; i < ip.size(); ++i)
        CHECK(acc.data()[i] == doctest::Approx(ip.data()[i]).epsilon(0.05));
    CHECK(max_abs_diff(interference_power(p, delta, nullptr, d), shift_truncate(p, 16, delta, 4)) == 0.0);
}

TEST_CASE("noise after decorrelation has variance p_ntr / p")
{
    Rng rng = derive_rng(19, {});
    const SystemDims d{8, 64, 8};
    const PilotBook book = make_zc_book(1, 64, 1, ZcVariant::Standard);
    UplinkScene s{d, &book, {ComplexMatrix(8, 8)}, {{0, 0, 1.0}}, 0.2};
    double acc = 0.0;
    std::size_t n = 0;
    for (int t = 0; t < 300; ++t) {
        const ComplexMatrix e = ls_decorrelate(synthesize_received(s, rng), s.assignments[0], book.basic(0), d);
        acc += frobenius_sq(e);
        n += e.size();
    }
    CHECK(acc / static_cast<double>(n) == doctest::Approx(0.2).epsilon(0.03));
}

TEST_CASE("scene validation")
{
    const SystemDims d{2, 8, 2};
    const PilotBook book = make_zc_book(1, 8, 1, ZcVariant::Standard);
    Rng rng = derive_rng(20, {});
    UplinkScene s{d, &book, {ComplexMatrix(2, 3)}, {{0, 0, 1.0}}, 0.0};
    CHECK_THROWS_AS(synthesize_received(s, rng), std::invalid_argument);
    s.channels = {ComplexMatrix(2, 2)};
    s.assignments = {{1, 0, 1.0}};
    CHECK_THROWS_AS(synthesize_received(s, rng), std::invalid_argument);
    s.assignments = {{0, 0, 1.0}};
    s.book = nullptr;
    CHECK_THROWS_AS(synthesize_received(s, rng), std::invalid_argument);
}
