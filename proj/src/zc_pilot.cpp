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

#include "mapsp/zc_pilot.hpp"

#include "mapsp/transforms.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>

namespace mapsp {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler;

void warn(const std::string &msg)
{
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    if (g_warn_handler)
        g_warn_handler(msg);
    else
        std::cerr << "warning: " << msg << '\n';
}

// exp(-i pi k / n) with k already reduced mod 2n.
cplx half_turn(long long k, std::size_t n)
{
    const auto kk = mod_index(k, 2 * n);
    return std::polar(1.0, -kPi * static_cast<double>(kk) / static_cast<double>(n));
}

// r * m * (m + c) mod 2n without overflow for desk-scale n.
long long zc_phase_index(long long root, long long m, long long c, std::size_t n)
{
    const auto two_n = static_cast<long long>(2 * n);
    const long long quad = static_cast<long long>(mod_index(m * (m + c), 2 * n));
    const long long r = static_cast<long long>(mod_index(root, 2 * n));
    return (r * quad) % two_n;
}

double wrap_pi(double x)
{
    x = std::remainder(x, 2.0 * kPi);
    if (x <= -kPi)
        x += 2.0 * kPi;
    return x;
}

void check_gcd(std::size_t n, long long root)
{
    const auto g = std::gcd(static_cast<long long>(n), root < 0 ? -root : root);
    if (g != 1)
        warn("zc root " + std::to_string(root) + " is not coprime with length " + std::to_string(n));
}

void detect_structure(Adpcm &z)
{
    std::size_t best = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < z.first_col.size(); ++i) {
        const double a = std::abs(z.first_col[i]);
        if (a > peak) {
            peak = a;
            best = i;
        }
    }
    z.structure = AdpcmStructure::GeneralToeplitz;
    z.offset = best;
    z.pai = 0.0;
    if (peak == 0.0)
        return;
    const double tol = 1e-9 * peak;
    for (std::size_t i = 0; i < z.first_col.size(); ++i)
        if (i != best && std::abs(z.first_col[i]) > tol)
            return;
    z.structure = AdpcmStructure::CyclicShiftScaled;
    z.pai = std::arg(z.first_col[best]);
}

} // namespace

cplx Adpcm::at(std::size_t i, std::size_t j) const
{
    const auto n = first_col.size();
    return first_col[mod_index(static_cast<long long>(i) - static_cast<long long>(j), n)];
}

ComplexMatrix Adpcm::dense() const
{
    const auto n = first_col.size();
    ComplexMatrix z(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            z(i, j) = at(i, j);
    return z;
}

cplx Adpcm::peak_value() const
{
    if (first_col.empty())
        return {};
    return static_cast<double>(first_col.size()) * first_col[offset];
}

void set_warning_handler(WarningHandler handler)
{
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    g_warn_handler = std::move(handler);
}

BasicPilot zc_sequence(std::size_t n, long long root, std::size_t shift, ZcVariant variant)
{
    if (n < 2)
        throw std::invalid_argument("zc_sequence: length must be >= 2");
    if (shift >= n)
        throw std::invalid_argument("zc_sequence: shift must be < length");
    check_gcd(n, root);

    BasicPilot p;
    p.kind = PilotKind::Zc;
    p.root = root;
    p.shift = shift;
    p.variant = variant;
    p.seq.resize(n);
    const auto phi = static_cast<long long>(shift);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ni = static_cast<long long>(i);
        long long k = 0;
        switch (variant) {
        case ZcVariant::ModN:
            k = zc_phase_index(root, static_cast<long long>(mod_index(ni - phi, n)), 1, n);
            break;
        case ZcVariant::ModNMinus1:
            k = zc_phase_index(root, static_cast<long long>(mod_index(ni - phi, n - 1)), 1, n);
            break;
        case ZcVariant::Standard:
            k = zc_phase_index(root, static_cast<long long>(mod_index(ni - phi, n)), n % 2 == 0 ? 0 : 1, n);
            break;
        }
        p.seq[i] = half_turn(k, n);
    }
    return p;
}

BasicPilot zc_extended(std::size_t n, std::size_t base_length, long long root, std::size_t shift)
{
    if (base_length < 2 || base_length > n)
        throw std::invalid_argument("zc_extended: require 2 <= base length <= n");
    if (shift >= n)
        throw std::invalid_argument("zc_extended: shift must be < length");
    const BasicPilot base = zc_sequence(base_length, root, 0, ZcVariant::ModN);
    BasicPilot p;
    p.kind = PilotKind::ZcExtended;
    p.root = root;
    p.shift = shift;
    p.seq.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        p.seq[i] = base.seq[mod_index(static_cast<long long>(i) - static_cast<long long>(shift), n) % base_length];
    return p;
}

BasicPilot dft_column_pilot(std::size_t n, std::size_t index)
{
    if (n < 1 || index >= n)
        throw std::invalid_argument("dft_column_pilot: index out of range");
    BasicPilot p;
    p.kind = PilotKind::DftColumn;
    p.shift = index;
    p.seq.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        p.seq[i] = half_turn(static_cast<long long>(2 * ((i * index) % n)), n);
    return p;
}

BasicPilot custom_pilot(CVec seq)
{
    if (seq.empty())
        throw std::invalid_argument("custom_pilot: empty sequence");
    for (const auto &v : seq)
        if (std::abs(std::abs(v) - 1.0) > 1e-9)
            throw std::invalid_argument("custom_pilot: entries must have unit modulus");
    BasicPilot p;
    p.kind = PilotKind::Custom;
    p.seq = std::move(seq);
    return p;
}

std::size_t largest_prime_at_most(std::size_t n)
{
    auto is_prime = [](std::size_t v) {
        if (v < 2)
            return false;
        for (std::size_t d = 2; d * d <= v; ++d)
            if (v % d == 0)
                return false;
        return true;
    };
    for (std::size_t v = n; v >= 2; --v)
        if (is_prime(v))
            return v;
    throw std::invalid_argument("largest_prime_at_most: no prime <= n");
}

CVec sfpcm_diagonal(const BasicPilot &a, const BasicPilot &b, long long phi_a, long long phi_b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("sfpcm_diagonal: pilot length mismatch");
    const auto n = a.size();
    const long long delta = phi_a - phi_b;
    CVec d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long k = 2 * static_cast<long long>(mod_index(static_cast<long long>(i) * delta, n));
        d[i] = half_turn(k, n) * a.seq[i] * std::conj(b.seq[i]);
    }
    return d;
}

ComplexMatrix adpcm_brute_dense(std::span<const cplx> diag)
{
    const auto n = diag.size();
    if (n == 0)
        throw std::invalid_argument("adpcm_brute_dense: empty diagonal");
    // [W]_{k,m} = exp(-i 2 pi k m / N)
    CVec tw(n);
    for (std::size_t k = 0; k < n; ++k)
        tw[k] = half_turn(static_cast<long long>(2 * k), n);
    const double inv = 1.0 / static_cast<double>(n);
    ComplexMatrix z(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k)
                acc += tw[(k * a) % n] * diag[k] * std::conj(tw[(k * b) % n]);
            z(a, b) = acc * inv;
        }
    return z;
}

Adpcm adpcm_brute(std::span<const cplx> diag)
{
    const auto n = diag.size();
    if (n == 0)
        throw std::invalid_argument("adpcm_brute: empty diagonal");
    CVec tw(n);
    for (std::size_t k = 0; k < n; ++k)
        tw[k] = half_turn(static_cast<long long>(2 * k), n);
    const double inv = 1.0 / static_cast<double>(n);
    Adpcm z;
    z.first_col.resize(n);
    // column 0 of W^T diag(d) W*: the conjugated factor is W_{k,0} = 1.
    for (std::size_t a = 0; a < n; ++a) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k)
            acc += tw[(k * a) % n] * diag[k];
        z.first_col[a] = acc * inv;
    }
    detect_structure(z);
    return z;
}

Adpcm adpcm_fast(std::span<const cplx> diag)
{
    if (diag.empty())
        throw std::invalid_argument("adpcm_fast: empty diagonal");
    Adpcm z;
    z.first_col = dft(diag);
    const double inv = 1.0 / static_cast<double>(diag.size());
    for (auto &v : z.first_col)
        v *= inv;
    detect_structure(z);
    return z;
}

CVec adpcm_first_row(std::span<const cplx> diag)
{
    return idft(diag);
}

bool closed_form_applicable(std::size_t n, long long root, long long phi)
{
    const long long t = root * (static_cast<long long>(n) - 2 * phi + 1);
    return t % 2 == 0;
}

Adpcm adpcm_zc_closed_form(std::size_t n, long long root, long long phi)
{
    if (n < 2)
        throw std::invalid_argument("adpcm_zc_closed_form: length must be >= 2");
    if (phi < 0 || phi >= static_cast<long long>(n))
        throw std::invalid_argument("adpcm_zc_closed_form: shift out of range");
    if (!closed_form_applicable(n, root, phi))
        throw std::domain_error("closed form inapplicable: r(N - 2 phi + 1) is odd");
    Adpcm z;
    z.first_col.assign(n, cplx{});
    z.structure = AdpcmStructure::CyclicShiftScaled;
    z.offset = mod_index(root * phi, n);
    const long long k = zc_phase_index(root, phi, -1, n);
    z.first_col[z.offset] = half_turn(k, n);
    z.pai = wrap_pi(-kPi * static_cast<double>(k) / static_cast<double>(n));
    return z;
}

double interference_score(const BasicPilot &a, const BasicPilot &b)
{
    const Adpcm z = adpcm_fast(sfpcm_diagonal(a, b, 0, 0));
    double s = 0.0;
    for (const auto &v : z.first_col)
        s += std::abs(v);
    return s;
}

RVec interference_profile(const BasicPilot &a, const BasicPilot &b)
{
    const Adpcm z = adpcm_fast(sfpcm_diagonal(a, b, 0, 0));
    RVec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        out[i] = std::abs(z.first_col[i]);
    return out;
}

CVec pilot_frequency_signal(const PilotAssignment &p, const BasicPilot &basic)
{
    const auto n = basic.size();
    if (p.shift >= n)
        throw std::invalid_argument("pilot_frequency_signal: shift out of range");
    if (!(p.power > 0.0))
        throw std::invalid_argument("pilot_frequency_signal: power must be positive");
    const double amp = std::sqrt(p.power);
    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long long k = 2 * static_cast<long long>((i * p.shift) % n);
        x[i] = amp * half_turn(k, n) * basic.seq[i];
    }
    return x;
}

} // namespace mapsp
