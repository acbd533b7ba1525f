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
#include "mapsp/zc_pilot.hpp"

namespace mapsp {

/// sum_{i,j} [P_bar_k Lambda^phi (.) P_sigma]_{i,j}. P_k is M x N_g (or M x N_c), p_sigma is M x N_c.
double overlap_metric(const RealMatrix &p_k, long long phi, const RealMatrix &p_sigma);

/// upsilon * sqrt(sum P_k * sum P_sigma).
double threshold_value(double sum_p_k, double sum_p_sigma, double upsilon);

/// Result of scanning phi = 0 .. N_c-1 for one UT against one group.
struct ShiftScan
{
    std::size_t shift = 0;
    double gamma = 0.0;
    std::size_t iterations = 0;
};

// Scan shifts in order; stop at the first one with overlap <= threshold, otherwise keep the
// first minimiser. A negative upsilon disables the early exit (exhaustive scan).
ShiftScan scan_shifts(const RealMatrix &p_k, const RealMatrix &p_sigma, double upsilon);

struct ScheduleOptions
{
    std::size_t groups = 1;
    std::vector<std::size_t> caps; // empty: ceil(K / Q) for every group
    double upsilon = 1e-7;
    bool exhaustive = false;       // never exit a scan early
};

struct ScheduleResult
{
    std::vector<PilotAssignment> assignments; // indexed by UT
    std::vector<double> final_gamma;          // overlap at assignment time
    std::vector<std::size_t> order;           // UTs in the order they were placed
    std::vector<std::size_t> scan_lengths;    // one entry per (UT, non-full group) scan
    std::size_t total_iterations = 0;
    std::vector<RealMatrix> superposition;    // P_bar_sigma per group, M x N_c
};

ScheduleResult schedule(const std::vector<RealMatrix> &uts, std::size_t subcarriers, const ScheduleOptions &opts,
                        Rng &rng);

// Same visiting order and tie-breaking, no early exit.
ScheduleResult schedule_greedy_exhaustive(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                                          std::size_t groups, const std::vector<std::size_t> &caps, Rng &rng);

/// P_bar_sigma of every group recomputed from the assignments.
std::vector<RealMatrix> superposition_from_scratch(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                                                   const std::vector<PilotAssignment> &assignments,
                                                   std::size_t groups);

/// Sum over groups and unordered member pairs of their shifted overlap.
double total_overlap(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                     const std::vector<PilotAssignment> &assignments);

} // namespace mapsp
