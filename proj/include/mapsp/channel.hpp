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

#include "mapsp/rng.hpp"
#include "mapsp/types.hpp"

#include <filesystem>

namespace mapsp {

enum class MagnitudeModel
{
    Deterministic, // |H| = sqrt(P)
    Rayleigh,      // |H| = sqrt(P) * g, g Rayleigh with E{g^2} = 1
};

struct ChannelParams
{
    SystemDims dims;
    double nu_tsym = 0.0314;
    double sigma_bar_sq = 0.01;
    std::size_t taps = 8;          // c: contiguous delay taps per UT
    std::size_t angular_span = 0;  // contiguous beams per UT; 0 means all M
    double tap_decay = 0.0;        // e-folding length in taps; 0 picks c/2
    double mu_jitter = 0.1;        // per-element argument jitter bound (rad)
    double mu_ramp = 1.0;          // scale of the per-UT linear phase ramp; 0 gives one LoS phase per UT
    MagnitudeModel magnitude = MagnitudeModel::Deterministic;

    void validate() const;
    std::size_t span() const { return angular_span == 0 ? dims.antennas : angular_span; }
};

/// Mean arguments (rad, in [0, 2 pi)) and the shared argument variance.
struct ArgumentModel
{
    RealMatrix mu;
    double sigma_bar_sq = 0.0;
};

/// Return-to-zero rotation exp(-i mu) for every element.
ComplexMatrix return_to_zero(const ArgumentModel &args);

RealMatrix generate_power_matrix(const ChannelParams &params, Rng &rng);

// One uniform line-of-sight argument per UT plus bounded per-element jitter.
ArgumentModel generate_argument_model(const ChannelParams &params, Rng &rng);

ComplexMatrix realize_channel(const RealMatrix &p, const ArgumentModel &args, Rng &rng,
                              MagnitudeModel magnitude = MagnitudeModel::Deterministic);

double bessel_j0(double x);

/// J0(2 pi nu T_sym dl).
double tcf(double delta_ell, double nu_tsym);

// rho H + sqrt(1 - rho^2) H_innov, with H_innov drawn under an independent uniform
// line-of-sight argument so that it is zero mean and uncorrelated with H.
ComplexMatrix evolve_channel(const ComplexMatrix &h, const RealMatrix &p, const ArgumentModel &args,
                             double delta_ell, double nu_tsym, Rng &rng,
                             MagnitudeModel magnitude = MagnitudeModel::Deterministic);

struct RayPath
{
    cplx gain;
    double cosine = 0.0; // cos of the angle of arrival
    double delay = 0.0;  // in samples
};

/// Space-frequency channel G_{m,n} = sum_p g_p exp(-i pi m cos a_p) exp(-i 2 pi n tau_p / N_c).
ComplexMatrix ray_channel(const std::vector<RayPath> &paths, const SystemDims &dims);

/// beta exp(-i 2 pi d / lambda).
cplx los_gain(double beta, double distance, double wavelength);

/// Power matrices and argument means for a set of UTs.
struct ChannelEnsemble
{
    SystemDims dims;
    double sigma_bar_sq = 0.0;
    std::vector<RealMatrix> power;
    std::vector<ArgumentModel> args;
};

void write_ensemble(const std::filesystem::path &path, const ChannelEnsemble &ens);
ChannelEnsemble read_ensemble(const std::filesystem::path &path);

} // namespace mapsp
