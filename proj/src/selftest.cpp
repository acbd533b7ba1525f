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

#include "mapsp/harness.hpp"
#include "mapsp/transforms.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>

namespace mapsp {

namespace {

CVec random_unit(std::size_t n, Rng &rng)
{
    CVec v(n);
    for (auto &x : v)
        x = std::polar(1.0, uniform(rng, -kPi, kPi));
    return v;
}

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng &rng)
{
    ComplexMatrix m(r, c);
    for (auto &x : m.data())
        x = {std_normal(rng), std_normal(rng)};
    return m;
}

bool check_fft(Rng &rng)
{
    for (std::size_t n : {1u, 2u, 7u, 12u, 64u, 90u, 127u}) {
        CVec v(n);
        for (auto &x : v)
            x = {std_normal(rng), std_normal(rng)};
        if (max_abs_diff(dft(v), dft_direct(v)) > 1e-9)
            return false;
        if (max_abs_diff(idft(dft(v)), v) > 1e-9)
            return false;
    }
    return true;
}

bool check_adpcm(Rng &rng)
{
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
        const CVec d = random_unit(n, rng);
        const Adpcm a = adpcm_fast(d);
        const Adpcm b = adpcm_brute(d);
        if (max_abs_diff(a.first_col, b.first_col) > 1e-10)
            return false;
        if (max_abs_diff(a.dense(), adpcm_brute_dense(d)) > 1e-10)
            return false;
    }
    return true;
}

bool check_closed_form()
{
    for (std::size_t n : {15u, 21u, 63u})
        for (long long r : {1LL, 2LL, 4LL})
            for (long long phi = 0; phi < static_cast<long long>(n); ++phi) {
                if (std::gcd(static_cast<long long>(n), r) != 1 || !closed_form_applicable(n, r, phi))
                    continue;
                const auto a = zc_sequence(n, r, 0);
                const auto b = zc_sequence(n, r, static_cast<std::size_t>(phi));
                const Adpcm brute = adpcm_brute(sfpcm_diagonal(b, a, 0, 0));
                const Adpcm cf = adpcm_zc_closed_form(n, r, phi);
                if (brute.offset != cf.offset || std::abs(brute.peak_value() - cf.peak_value()) > 1e-9)
                    return false;
            }
    return true;
}

bool check_transforms(Rng &rng)
{
    const SystemDims d{8, 32, 6};
    const ComplexMatrix h = random_matrix(8, 6, rng);
    if (max_abs_diff(sf_to_ad(ad_to_sf(h, d), d), h) > 1e-10)
        return false;
    const ComplexMatrix a = array_response(8);
    return max_abs_diff(matmul(conj_transpose(a), a), identity(8)) < 1e-12;
}

bool check_bessel()
{
    for (double x = 0.0; x < 40.0; x += 0.37)
        if (std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) > 1e-10)
            return false;
    return true;
}

bool check_decomposition(Rng &rng)
{
    const SystemDims d{4, 32, 4};
    const PilotBook book = make_zc_book(2, d.subcarriers, 1, ZcVariant::Standard);
    UplinkScene s;
    s.dims = d;
    s.book = &book;
    for (std::size_t k = 0; k < 4; ++k)
        s.channels.push_back(random_matrix(4, 4, rng));
    s.assignments = {{0, 0, 1.0}, {1, 0, 1.0}, {0, 9, 1.0}, {1, 17, 1.0}};
    s.p_ntr = 0.0;
    const ComplexMatrix y = synthesize_received(s, rng);
    for (std::size_t t = 0; t < 4; ++t) {
        const auto &a = s.assignments[t];
        const ComplexMatrix yd = ls_decorrelate(y, a, book.basic(a.group), d);
        const Decomposition dec = decompose(s, t);
        if (max_abs_diff(yd, dec.own + dec.intra + dec.inter) > 1e-9)
            return false;
    }
    return true;
}

bool check_scheduler(Rng &rng)
{
    std::vector<RealMatrix> uts;
    for (std::size_t k = 0; k < 4; ++k) {
        RealMatrix p(2, 4);
        for (auto &x : p.data())
            x = 1.0;
        uts.push_back(p);
    }
    ScheduleOptions o;
    o.groups = 1;
    o.upsilon = 0.0;
    const ScheduleResult r = schedule(uts, 16, o, rng);
    return total_overlap(uts, 16, r.assignments) == 0.0;
}

} // namespace

int run_selftest(std::ostream &out)
{
    Rng rng = derive_rng(20240601, {});
    const std::pair<const char *, std::function<bool()>> checks[] = {
        {"fft_vs_direct", [&] { return check_fft(rng); }},
        {"adpcm_fast_vs_brute", [&] { return check_adpcm(rng); }},
        {"zc_closed_form", [] { return check_closed_form(); }},
        {"angle_delay_roundtrip", [&] { return check_transforms(rng); }},
        {"bessel_j0", [] { return check_bessel(); }},
        {"received_decomposition", [&] { return check_decomposition(rng); }},
        {"scheduler_zero_overlap", [&] { return check_scheduler(rng); }},
    };
    int failures = 0;
    for (const auto &[name, fn] : checks) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception &e) {
            out << "selftest " << name << " threw: " << e.what() << '\n';
        }
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    }
    return failures;
}

} // namespace mapsp
