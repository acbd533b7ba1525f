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

#include "mapsp/config.hpp"
#include "mapsp/estimation.hpp"
#include "mapsp/scheduler.hpp"

#include <iosfwd>

namespace mapsp {

enum class ExecPolicy
{
    Serial,
    Parallel, // OpenMP over trials
};

struct SweepRow
{
    std::string method;
    std::size_t groups = 1;
    std::size_t uts = 0;
    double snr_db = 0.0;
    double mse_emp = 0.0;    // sum |H_hat - H|^2 / sum P over UTs and trials
    double mse_theory = 0.0; // closed-form prediction, same normalisation
    double mse_bound = 0.0;  // interference-free error, same normalisation
    double se_proxy = 0.0;   // bits/s/Hz summed over UTs, averaged over trials
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

/// Channel estimation at the pilot symbol (lag 0).
std::vector<SweepRow> run_mse_sweep(const ExperimentConfig &cfg, ExecPolicy policy = ExecPolicy::Parallel);

/// Prediction at every lag of cfg.delta_ell. Rows for lag d > 0 carry the method name "<method>@dl<d>".
std::vector<SweepRow> run_prediction_sweep(const ExperimentConfig &cfg, ExecPolicy policy = ExecPolicy::Parallel);

/// Aggregate uplink rate of an MMSE combiner designed on the estimates and applied to the true channels,
/// averaged over `samples` evenly spaced subcarriers and scaled by `data_fraction`.
/// `error_var` (optional, one M x N_g matrix per UT) is the per-element estimation error variance; when
/// given, the combiner is regularised by the matching error covariance.
double se_proxy(const std::vector<ComplexMatrix> &estimates, const std::vector<ComplexMatrix> &truth, double eta,
                const SystemDims &dims, std::size_t samples, double data_fraction = 6.0 / 7.0,
                const std::vector<RealMatrix> &error_var = {});

/// Per-element error variance of a Wiener filter with gain P / denominator: P - P^2 / denominator.
RealMatrix wiener_error_variance(const RealMatrix &p, const RealMatrix &denominator);

/// Everything one trial produces for one method: schedule, profiles and per-UT estimates.
struct TrialScene
{
    std::vector<RealMatrix> powers;
    std::vector<ArgumentModel> args;
    std::vector<ComplexMatrix> channels;
};

TrialScene draw_scene(const ExperimentConfig &cfg, std::size_t uts, Rng &rng);

void emit_csv(const std::vector<SweepRow> &rows, const std::filesystem::path &path);
void write_csv(const std::vector<SweepRow> &rows, std::ostream &out);
std::vector<SweepRow> parse_csv(std::istream &in);

inline constexpr const char *kSweepHeader =
    "method,Q,K,snr_db,mse_emp,mse_theory,mse_bound,se_proxy,seed,wall_ms";

/// Schedule of trial 0 for the first K and Q of the config, as CSV rows ut_id,group,shift,final_gamma.
void write_schedule_csv(const ExperimentConfig &cfg, const std::filesystem::path &path);

/// |ADPCM first column| between two ZC pilots, as CSV rows index,magnitude.
void write_profile_csv(std::size_t n, long long root_a, std::size_t shift_a, long long root_b, std::size_t shift_b,
                       const std::filesystem::path &path);

/// Quick oracle checks; prints one line per check and returns the number of failures.
int run_selftest(std::ostream &out);

} // namespace mapsp
