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

#include "mapsp/channel.hpp"
#include "mapsp/scheduler.hpp"

#include <set>

using namespace mapsp;

namespace {

RealMatrix taps(std::size_t m, std::size_t ng, std::size_t c0, std::size_t c1, double v = 1.0)
{
    RealMatrix p(m, ng);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = c0; j < c1; ++j)
            p(i, j) = v;
    return p;
}

std::vector<RealMatrix> random_uts(std::size_t k, std::uint64_t seed)
{
    ChannelParams prm;
    prm.dims = {8, 64, 8};
    prm.taps = 6;
    prm.angular_span = 4;
    Rng rng = derive_rng(seed, {});
    std::vector<RealMatrix> out;
    for (std::size_t i = 0; i < k; ++i)
        out.push_back(generate_power_matrix(prm, rng));
    return out;
}

} // namespace

TEST_CASE("overlap metric matches a direct double sum")
{
    const RealMatrix pk = taps(2, 3, 0, 3, 2.0);
    RealMatrix ps(2, 10);
    ps(0, 4) = 1.0;
    ps(1, 5) = 3.0;
    ps(1, 0) = 5.0;
    // phi = 3 moves columns 0..2 to 3..5
    CHECK(overlap_metric(pk, 3, ps) == doctest::Approx(2.0 * 1.0 + 2.0 * 3.0));
    // phi = 8 wraps column 2 onto column 0
    CHECK(overlap_metric(pk, 8, ps) == doctest::Approx(2.0 * 5.0));
    CHECK(overlap_metric(pk, -2, ps) == overlap_metric(pk, 8, ps));
    CHECK(threshold_value(4.0, 9.0, 0.5) == doctest::Approx(3.0));
    CHECK_THROWS_AS(threshold_value(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("scan stops at the first shift under the threshold")
{
    const RealMatrix pk = taps(1, 1, 0, 1);
    RealMatrix ps(1, 8, 1.0);
    ps(0, 5) = 0.0;
    ps(0, 6) = 0.0;
    const ShiftScan s = scan_shifts(pk, ps, 0.0);
    CHECK(s.shift == 5);
    CHECK(s.iterations == 6);
    CHECK(s.gamma == 0.0);
    const ShiftScan full = scan_shifts(pk, ps, -1.0);
    CHECK(full.shift == 5);
    CHECK(full.iterations == 8);
}

TEST_CASE("disjoint UTs are packed without overlap")
{
    Rng rng = derive_rng(23, {});
    std::vector<RealMatrix> uts(8, taps(4, 8, 0, 8));
    ScheduleOptions o;
    o.groups = 1;
    o.upsilon = 0.0;
    const ScheduleResult r = schedule(uts, 64, o, rng);
    CHECK(total_overlap(uts, 64, r.assignments) == 0.0);
    std::set<std::size_t> shifts;
    for (const auto &a : r.assignments)
        shifts.insert(a.shift);
    CHECK(shifts.size() == 8);
    CHECK(r.order.size() == 8);
    CHECK(r.order.front() == 0);
}

TEST_CASE("incremental superposition equals recomputation")
{
    const auto uts = random_uts(12, 24);
    Rng rng = derive_rng(25, {});
    ScheduleOptions o;
    o.groups = 3;
    const ScheduleResult r = schedule(uts, 64, o, rng);
    const auto fresh = superposition_from_scratch(uts, 64, r.assignments, 3);
    for (std::size_t q = 0; q < 3; ++q)
        CHECK(max_abs_diff(fresh[q], r.superposition[q]) < 1e-9);
    std::vector<std::size_t> members(3, 0);
    for (const auto &a : r.assignments)
        ++members[a.group];
    for (auto m : members)
        CHECK(m <= 4);
}

TEST_CASE("zero threshold reproduces the exhaustive greedy search")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto uts = random_uts(16, seed);
        Rng r1 = derive_rng(seed, {1});
        Rng r2 = derive_rng(seed, {1});
        ScheduleOptions o;
        o.groups = 2;
        o.upsilon = 0.0;
        const ScheduleResult a = schedule(uts, 64, o, r1);
        const ScheduleResult b = schedule_greedy_exhaustive(uts, 64, 2, {}, r2);
        for (std::size_t k = 0; k < uts.size(); ++k) {
            CHECK(a.assignments[k].group == b.assignments[k].group);
            CHECK(a.assignments[k].shift == b.assignments[k].shift);
        }
        CHECK(a.total_iterations <= b.total_iterations);
    }
}

TEST_CASE("infeasible capacities are rejected")
{
    Rng rng = derive_rng(26, {});
    const auto uts = random_uts(5, 27);
    ScheduleOptions o;
    o.groups = 2;
    o.caps = {2, 2};
    CHECK_THROWS_AS(schedule(uts, 64, o, rng), std::invalid_argument);
    o.caps = {1};
    CHECK_THROWS_AS(schedule(uts, 64, o, rng), std::invalid_argument);
    o.caps = {};
    o.groups = 0;
    CHECK_THROWS_AS(schedule(uts, 64, o, rng), std::invalid_argument);
}

TEST_CASE("a larger threshold never lengthens a single scan")
{
    const auto uts = random_uts(14, 28);
    for (std::size_t k = 1; k < uts.size(); ++k) {
        RealMatrix sigma(8, 64);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t c = 0; c < 8; ++c)
                    sigma(i, (c + 5 * j) % 64) += uts[j](i, c);
        std::size_t prev_iter = static_cast<std::size_t>(-1);
        for (double ups : {0.0, 1e-4, 1e-2, 0.05, 0.1, 0.3, 1.0, 10.0}) {
            const ShiftScan s = scan_shifts(uts[k], sigma, ups);
            CHECK(s.iterations <= prev_iter);
            prev_iter = s.iterations;
        }
    }
}
