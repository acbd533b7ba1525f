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

#include "mapsp/scheduler.hpp"

#include "mapsp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mapsp {

namespace {

void add_shifted(RealMatrix &acc, const RealMatrix &p, std::size_t shift)
{
    const auto nc = acc.cols();
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t a = 0; a < p.cols(); ++a)
            acc(i, (a + shift) % nc) += p(i, a);
}

} // namespace

double overlap_metric(const RealMatrix &p_k, long long phi, const RealMatrix &p_sigma)
{
    if (p_k.rows() != p_sigma.rows() || p_k.cols() > p_sigma.cols())
        throw std::invalid_argument("overlap_metric: P_k must be M x N with N <= N_c of the superposition");
    const auto nc = p_sigma.cols();
    const std::size_t s = mod_index(phi, nc);
    double g = 0.0;
    for (std::size_t i = 0; i < p_k.rows(); ++i) {
        const auto src = p_k.row(i);
        const auto dst = p_sigma.row(i);
        for (std::size_t a = 0; a < src.size(); ++a) {
            if (src[a] == 0.0)
                continue;
            std::size_t c = a + s;
            if (c >= nc)
                c -= nc;
            g += src[a] * dst[c];
        }
    }
    return g;
}

double threshold_value(double sum_p_k, double sum_p_sigma, double upsilon)
{
    if (upsilon < 0.0 || sum_p_k < 0.0 || sum_p_sigma < 0.0)
        throw std::invalid_argument("threshold_value: negative input");
    return upsilon * std::sqrt(sum_p_k * sum_p_sigma);
}

ShiftScan scan_shifts(const RealMatrix &p_k, const RealMatrix &p_sigma, double upsilon)
{
    const bool early = upsilon >= 0.0;
    const double thr = early ? threshold_value(sum(p_k), sum(p_sigma), upsilon) : 0.0;
    ShiftScan best;
    best.gamma = std::numeric_limits<double>::infinity();
    for (std::size_t phi = 0; phi < p_sigma.cols(); ++phi) {
        ++best.iterations;
        const double g = overlap_metric(p_k, static_cast<long long>(phi), p_sigma);
        if (early && g <= thr) {
            best.shift = phi;
            best.gamma = g;
            break;
        }
        if (g < best.gamma) {
            best.shift = phi;
            best.gamma = g;
        }
    }
    return best;
}

ScheduleResult schedule(const std::vector<RealMatrix> &uts, std::size_t subcarriers, const ScheduleOptions &opts,
                        Rng &rng)
{
    const std::size_t k_total = uts.size();
    const std::size_t q_total = opts.groups;
    if (q_total < 1)
        throw std::invalid_argument("schedule: need at least one group");
    if (!opts.exhaustive && opts.upsilon < 0.0)
        throw std::invalid_argument("schedule: threshold must be >= 0");
    std::vector<std::size_t> caps = opts.caps;
    if (caps.empty())
        caps.assign(q_total, (k_total + q_total - 1) / q_total);
    if (caps.size() != q_total)
        throw std::invalid_argument("schedule: one cap per group required");
    if (std::accumulate(caps.begin(), caps.end(), std::size_t{0}) < k_total)
        throw std::invalid_argument("schedule: group caps cannot hold every UT");
    for (const auto &p : uts)
        if (p.rows() != uts.front().rows() || p.cols() > subcarriers)
            throw std::invalid_argument("schedule: power matrices must share M and fit in N_c columns");

    ScheduleResult res;
    res.assignments.resize(k_total);
    res.final_gamma.assign(k_total, 0.0);
    const std::size_t rows = uts.empty() ? 0 : uts.front().rows();
    res.superposition.assign(q_total, RealMatrix(rows, subcarriers));
    std::vector<std::size_t> members(q_total, 0);

    const std::size_t seeded = std::min(k_total, q_total);
    for (std::size_t q = 0; q < seeded; ++q) {
        if (caps[q] == 0)
            throw std::invalid_argument("schedule: a seeded group has zero capacity");
        res.assignments[q] = {q, 0, 1.0};
        add_shifted(res.superposition[q], uts[q], 0);
        members[q] = 1;
        res.order.push_back(q);
    }

    std::vector<std::size_t> pending(k_total - seeded);
    std::iota(pending.begin(), pending.end(), seeded);
    std::shuffle(pending.begin(), pending.end(), rng);

    const double ups = opts.exhaustive ? -1.0 : opts.upsilon;
    for (const std::size_t k : pending) {
        std::size_t best_q = q_total;
        ShiftScan best;
        best.gamma = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < q_total; ++q) {
            if (members[q] >= caps[q])
                continue;
            const ShiftScan s = scan_shifts(uts[k], res.superposition[q], ups);
            res.scan_lengths.push_back(s.iterations);
            res.total_iterations += s.iterations;
            if (best_q == q_total || s.gamma < best.gamma) {
                best = s;
                best_q = q;
            }
        }
        if (best_q == q_total)
            throw std::runtime_error("schedule: every group is full for UT " + std::to_string(k));
        res.assignments[k] = {best_q, best.shift, 1.0};
        res.final_gamma[k] = best.gamma;
        add_shifted(res.superposition[best_q], uts[k], best.shift);
        ++members[best_q];
        res.order.push_back(k);
    }
    return res;
}

ScheduleResult schedule_greedy_exhaustive(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                                          std::size_t groups, const std::vector<std::size_t> &caps, Rng &rng)
{
    ScheduleOptions opts;
    opts.groups = groups;
    opts.caps = caps;
    opts.upsilon = 0.0;
    opts.exhaustive = true;
    return schedule(uts, subcarriers, opts, rng);
}

std::vector<RealMatrix> superposition_from_scratch(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                                                   const std::vector<PilotAssignment> &assignments,
                                                   std::size_t groups)
{
    if (uts.size() != assignments.size())
        throw std::invalid_argument("superposition_from_scratch: count mismatch");
    const std::size_t rows = uts.empty() ? 0 : uts.front().rows();
    std::vector<RealMatrix> out(groups, RealMatrix(rows, subcarriers));
    for (std::size_t k = 0; k < uts.size(); ++k)
        add_shifted(out.at(assignments[k].group), uts[k], assignments[k].shift);
    return out;
}

double total_overlap(const std::vector<RealMatrix> &uts, std::size_t subcarriers,
                     const std::vector<PilotAssignment> &assignments)
{
    if (uts.size() != assignments.size())
        throw std::invalid_argument("total_overlap: count mismatch");
    double s = 0.0;
    for (std::size_t a = 0; a < uts.size(); ++a)
        for (std::size_t b = a + 1; b < uts.size(); ++b) {
            if (assignments[a].group != assignments[b].group)
                continue;
            RealMatrix pb(uts[b].rows(), subcarriers);
            add_shifted(pb, uts[b], assignments[b].shift);
            s += overlap_metric(uts[a], static_cast<long long>(assignments[a].shift), pb);
        }
    return s;
}

} // namespace mapsp
