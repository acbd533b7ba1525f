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

#include <functional>

namespace mapsp {

/// Index convention used when building a Zadoff-Chu sequence.
enum class ZcVariant
{
    ModN,       // exp(-i pi r m(m+1)/N), m = <n - phi>_N
    ModNMinus1, // same phase law, m = <n - phi>_{N-1}
    Standard,        // m(m+1) for odd N, m^2 for even N; m = <n - phi>_N
};

enum class PilotKind
{
    Zc,
    ZcExtended,
    DftColumn,
    Custom,
};

/// One basic pilot sequence s_q of length N_c. Every entry has unit modulus.
struct BasicPilot
{
    CVec seq;
    PilotKind kind = PilotKind::Custom;
    long long root = 0;
    std::size_t shift = 0;
    ZcVariant variant = ZcVariant::ModN;

    std::size_t size() const noexcept { return seq.size(); }
};

/// Group index, phase-shift factor and transmit power of one UT.
struct PilotAssignment
{
    std::size_t group = 0;
    std::size_t shift = 0;
    double power = 1.0;
};

enum class AdpcmStructure
{
    CyclicShiftScaled,
    GeneralToeplitz,
};

/// Circulant pilot cross-correlation in the angle-delay domain, stored by its first column.
/// first_col is (1/N_c) DFT(sfpcm), so [Z]_{i,j} = first_col[<i - j>_N].
struct Adpcm
{
    CVec first_col;
    AdpcmStructure structure = AdpcmStructure::GeneralToeplitz;
    std::size_t offset = 0; // peak index when structured
    double pai = 0.0;       // argument of the peak when structured

    std::size_t size() const noexcept { return first_col.size(); }
    cplx at(std::size_t i, std::size_t j) const;
    ComplexMatrix dense() const;
    // N_c * first_col[offset]: the unnormalised peak of W^T R W*.
    cplx peak_value() const;
};

/// Receives non-fatal diagnostics (for example a root that is not coprime with N).
using WarningHandler = std::function<void(const std::string &)>;
void set_warning_handler(WarningHandler handler);

BasicPilot zc_sequence(std::size_t n, long long root, std::size_t shift,
                       ZcVariant variant = ZcVariant::ModN);

// Length-L ZC (L odd, usually the largest prime <= n) cyclically extended to n entries.
BasicPilot zc_extended(std::size_t n, std::size_t base_length, long long root, std::size_t shift);

// Column `index` of the unnormalised DFT matrix as a pilot.
BasicPilot dft_column_pilot(std::size_t n, std::size_t index);

// Arbitrary sequence; every entry must have unit modulus.
BasicPilot custom_pilot(CVec seq);

std::size_t largest_prime_at_most(std::size_t n);

/// diag(D_{phi_a - phi_b} R): entries exp(-i 2 pi n (phi_a - phi_b) / N) a[n] conj(b[n]).
CVec sfpcm_diagonal(const BasicPilot &a, const BasicPilot &b, long long phi_a, long long phi_b);

// (1/N) W^T diag(d) W* by explicit summation over the diagonal.
Adpcm adpcm_brute(std::span<const cplx> diag);
ComplexMatrix adpcm_brute_dense(std::span<const cplx> diag);

// First column (1/N) DFT(d) and first row IDFT(d) via the fast transform.
Adpcm adpcm_fast(std::span<const cplx> diag);
CVec adpcm_first_row(std::span<const cplx> diag);

// Closed form for two same-root ZC pilots whose cyclic shifts differ by phi.
// Requires r (N - 2 phi + 1) even; throws std::domain_error otherwise.
bool closed_form_applicable(std::size_t n, long long root, long long phi);
Adpcm adpcm_zc_closed_form(std::size_t n, long long root, long long phi);

/// sum_i |(1/N) DFT(diag R^a_b)|_i. Equals 1 for an ideal single-peak cross-correlation.
double interference_score(const BasicPilot &a, const BasicPilot &b);

/// |first_col| of the ADPCM between two pilots, for plotting.
RVec interference_profile(const BasicPilot &a, const BasicPilot &b);

/// Diagonal of X_k: sqrt(p) exp(-i 2 pi n phi / N) s_q[n].
CVec pilot_frequency_signal(const PilotAssignment &p, const BasicPilot &basic);

} // namespace mapsp
