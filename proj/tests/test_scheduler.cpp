// SPDX-License-Identifier: Apache-2.0
//
// beamwave: beamforming and device scheduling for superimposed
// multicast-unicast transmissions in mmWave networks
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

#include <doctest.h>

#include "beamwave/scheduler.hpp"

using namespace beamwave;
using namespace beamwave::metrics;
using namespace beamwave::scheduler;

namespace
{

DiscordanceMatrix random_theta(Substream &rng, int k)
{
    DiscordanceMatrix theta;
    theta.values = RMatrix::Zero(k, k);
    for (int j = 0; j < k; ++j)
    {
        for (int l = j + 1; l < k; ++l)
        {
            const double v = rng.uniform();
            theta.values(j, l) = v;
            theta.values(l, j) = v;
        }
    }
    return theta;
}

} // namespace

TEST_CASE("selecting all devices sums every pair")
{
    Substream rng = Substream::derived(50, {0});
    const DiscordanceMatrix theta = random_theta(rng, 5);
    const ScheduleDecision d = solve_schedule(theta, 5);
    CHECK(d.selected == std::vector<int>{0, 1, 2, 3, 4});
    double total = 0.0;
    for (int j = 0; j < 5; ++j)
    {
        for (int l = j + 1; l < 5; ++l)
        {
            total += theta.values(j, l);
        }
    }
    CHECK(d.objective == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("a unique zero-cost pair wins")
{
    DiscordanceMatrix theta;
    theta.values = RMatrix::Ones(4, 4);
    theta.values.diagonal().setZero();
    theta.values(0, 1) = 0.0;
    theta.values(1, 0) = 0.0;
    const ScheduleDecision d = solve_schedule(theta, 2);
    CHECK(d.selected == std::vector<int>{0, 1});
    CHECK(d.objective == 0.0);
    CHECK(d.mu == std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(d.nu[pair_index(4, 0, 1)] == 1);
    CHECK(d.nu[pair_index(4, 2, 3)] == 0);
}

TEST_CASE("branch and bound matches exhaustive enumeration everywhere")
{
    Substream rng = Substream::derived(51, {0});
    for (int trial = 0; trial < 40; ++trial)
    {
        const int k = 4 + static_cast<int>(rng.below(7)); // 4..10
        const DiscordanceMatrix theta = random_theta(rng, k);
        for (int k_prime = 1; k_prime <= k; ++k_prime)
        {
            const ScheduleDecision exact = solve_schedule(theta, k_prime);
            const ScheduleDecision brute = enumerate_schedule(theta, k_prime);
            CHECK(exact.objective == doctest::Approx(brute.objective).epsilon(1e-12));
            CHECK(exact.selected == brute.selected);
        }
    }
}

TEST_CASE("ties break toward the lexicographically smallest subset")
{
    // All-equal costs: every subset ties, so {0, 1, ..., k'-1} must win.
    DiscordanceMatrix theta;
    theta.values = RMatrix::Constant(6, 6, 0.25);
    theta.values.diagonal().setZero();
    for (int k_prime = 1; k_prime <= 6; ++k_prime)
    {
        const ScheduleDecision d = solve_schedule(theta, k_prime);
        for (int i = 0; i < k_prime; ++i)
        {
            CHECK(d.selected[static_cast<std::size_t>(i)] == i);
        }
    }
}

TEST_CASE("k_prime of one selects the first device by the tie rule")
{
    Substream rng = Substream::derived(52, {0});
    const DiscordanceMatrix theta = random_theta(rng, 5);
    const ScheduleDecision d = solve_schedule(theta, 1);
    CHECK(d.selected == std::vector<int>{0});
    CHECK(d.objective == 0.0);
}

TEST_CASE("invalid k_prime is rejected")
{
    Substream rng = Substream::derived(53, {0});
    const DiscordanceMatrix theta = random_theta(rng, 4);
    CHECK_THROWS_AS(solve_schedule(theta, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_schedule(theta, 5), std::invalid_argument);
    Substream stream(1);
    CHECK_THROWS_AS(random_schedule(stream, 4, 5), std::invalid_argument);
}

TEST_CASE("random schedule is deterministic per stream and full at k_prime == k")
{
    Substream a = Substream::derived(54, {0});
    Substream b = Substream::derived(54, {0});
    const ScheduleDecision da = random_schedule(a, 9, 4);
    const ScheduleDecision db = random_schedule(b, 9, 4);
    CHECK(da.selected == db.selected);

    Substream c = Substream::derived(55, {0});
    const ScheduleDecision full = random_schedule(c, 6, 6);
    CHECK(full.selected == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("random schedule selects each device with the right frequency")
{
    Substream rng = Substream::derived(56, {0});
    const int draws = 100000;
    std::vector<int> hits(6, 0);
    for (int i = 0; i < draws; ++i)
    {
        const ScheduleDecision d = random_schedule(rng, 6, 3);
        for (int idx : d.selected)
        {
            ++hits[static_cast<std::size_t>(idx)];
        }
    }
    for (int device = 0; device < 6; ++device)
    {
        const double freq = static_cast<double>(hits[static_cast<std::size_t>(device)]) / draws;
        CHECK(std::abs(freq - 0.5) <= 0.01);
    }
}

TEST_CASE("solver dominates random selections")
{
    Substream rng = Substream::derived(57, {0});
    const DiscordanceMatrix theta = random_theta(rng, 8);
    const ScheduleDecision best = solve_schedule(theta, 4);
    for (int trial = 0; trial < 100; ++trial)
    {
        const ScheduleDecision r = random_schedule(rng, 8, 4, &theta);
        CHECK(best.objective <= r.objective + 1e-12);
    }
}

TEST_CASE("optimal objective grows with the selection size")
{
    Substream rng = Substream::derived(58, {0});
    const DiscordanceMatrix theta = random_theta(rng, 9);
    double prev = -1.0;
    for (int k_prime = 1; k_prime <= 9; ++k_prime)
    {
        const double objective = solve_schedule(theta, k_prime).objective;
        CHECK(objective >= prev - 1e-12);
        prev = objective;
    }
}

TEST_CASE("pair indicators are consistent with the selection")
{
    Substream rng = Substream::derived(59, {0});
    const DiscordanceMatrix theta = random_theta(rng, 7);
    const ScheduleDecision d = solve_schedule(theta, 3);
    double objective = 0.0;
    for (int j = 0; j < 7; ++j)
    {
        for (int l = j + 1; l < 7; ++l)
        {
            const int expect = d.mu[static_cast<std::size_t>(j)] * d.mu[static_cast<std::size_t>(l)];
            CHECK(d.nu[static_cast<std::size_t>(pair_index(7, j, l))] == expect);
            objective += theta.values(j, l) * expect;
        }
    }
    CHECK(d.objective == doctest::Approx(objective).epsilon(1e-12));
}
