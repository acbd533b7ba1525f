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

#include "mapsp/channel.hpp"
#include "mapsp/uplink.hpp"

namespace mapsp {

/// Interference seen by one target UT after decorrelation.
struct InterferenceProfile
{
    RealMatrix p_sigma;        // every UT, target included
    RealMatrix p_intra;        // target group, target included
    RealMatrix p_inter;        // other groups
    RealMatrix theta_sigma;    // argument of the power-weighted inter-group phasor; 0 where p_inter == 0
    RealMatrix inter_misalign; // sum_c w_c sin^2(beta_c - theta_sigma) over inter-group contributions
    ComplexMatrix theta_zero;  // exp(-i mu_target)

    bool has_inter(std::size_t i, std::size_t j) const { return p_inter(i, j) > 0.0; }
};

// Sum of shifted power matrices over all UTs plus the equivalent inter-group argument.
// Powers are weighted by p_k / p_target. Arguments are taken relative to the target's mean.
InterferenceProfile aggregate_interference_power(const std::vector<RealMatrix> &powers,
                                                 const std::vector<ArgumentModel> &args,
                                                 const std::vector<PilotAssignment> &assignments,
                                                 const PilotBook &book, std::size_t target, const SystemDims &dims);

/// Element-wise P / (P_sigma + 1/eta) * Y.
ComplexMatrix mmse_estimate(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &p_sigma, double eta);
ComplexMatrix mmse_estimate(const ComplexMatrix &y, const RealMatrix &p, const InterferenceProfile &profile,
                            double eta);

/// Element-wise P / denominator * Y; zero where P or the denominator is zero.
ComplexMatrix wiener_apply(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &denominator);

/// sum P - P^2 / (P_sigma + 1/eta).
double mmse_error_theoretical(const RealMatrix &p, const RealMatrix &p_sigma, double eta);

/// sum P - P^2 / (P + 1/eta), the interference-free error.
double mmse_error_lower_bound(const RealMatrix &p, double eta);
double mmse_error_lower_bound(const std::vector<RealMatrix> &powers, double eta);

/// Theta_0 (.) Y projected as Re{.} - Im{.}/tan(Theta_sigma), in the target's zero-argument frame.
/// Elements without inter-group power, or with |sin Theta_sigma| < eps_tan, keep Theta_0 (.) Y.
ComplexMatrix preprocess_projection(const ComplexMatrix &y, const InterferenceProfile &profile,
                                    double eps_tan = 1e-3);

struct PreprocessOptions
{
    double eps_tan = 1e-3;
    bool gate = true; // keep the raw signal where the projection is predicted to be worse
};

struct PreprocessResult
{
    ComplexMatrix y;         // original frame, ready for wiener_apply
    RealMatrix denominator;  // Wiener denominator matching y
    double predicted_error = 0.0;
    std::size_t processed = 0;
    std::size_t singular = 0; // bypassed because |sin Theta_sigma| < eps_tan
    std::size_t declined = 0; // bypassed by the gate
};

PreprocessResult preprocess(const ComplexMatrix &y, const RealMatrix &p_target, const InterferenceProfile &profile,
                            double sigma_bar_sq, double eta, const PreprocessOptions &opts = {});

/// rho(dl) P Y / (P_sigma + 1/eta).
ComplexMatrix predict_channel(const ComplexMatrix &y, const RealMatrix &p, const RealMatrix &p_sigma, double eta,
                              double delta_ell, double nu_tsym);

/// sum P - rho^2 P^2 / (P_sigma + 1/eta).
double prediction_error_theoretical(const RealMatrix &p, const RealMatrix &p_sigma, double eta, double delta_ell,
                                    double nu_tsym);

} // namespace mapsp
