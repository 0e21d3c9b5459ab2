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

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "beamwave/metrics.hpp"
#include "beamwave/rng.hpp"

namespace beamwave::scheduler
{

/// A dual-layer scheduling decision: the selected index set, the per-device
/// indicator vector mu, the pair indicators nu (upper triangle, j < l), and
/// the aggregate pairwise discordance of the selection.
struct ScheduleDecision
{
    std::vector<int> selected;    ///< ascending indices, size K'
    std::vector<std::uint8_t> mu; ///< size K, mu[k] == 1 iff k selected
    std::vector<std::uint8_t> nu; ///< flattened upper triangle, nu[j][l] = mu[j]*mu[l]
    double objective = 0.0;       ///< sum_{j<l} theta[j][l] * nu[j][l]

    int k() const { return static_cast<int>(mu.size()); }
    int k_prime() const { return static_cast<int>(selected.size()); }
};

/// Index of pair (j, l), j < l, in the flattened upper triangle of a K x K matrix.
inline int pair_index(int k, int j, int l)
{
    return j * k - j * (j + 1) / 2 + (l - j - 1);
}

/// Aggregate pairwise cost sum_{j<l in subset} theta[j][l].
double subset_cost(const metrics::DiscordanceMatrix &theta, const std::vector<int> &subset);

/// Builds a consistent decision (mu, nu, objective) from a selected subset.
/// Objective is 0 when no discordance matrix is given.
ScheduleDecision decision_from_subset(std::vector<int> selected, int k,
                                      const metrics::DiscordanceMatrix *theta);

/// Visits every size-k_prime subset of {0..k-1} in lexicographic order.
void for_each_subset(int k, int k_prime, const std::function<void(const std::vector<int> &)> &fn);

/// Exact minimizer of the aggregate pairwise discordance over all size-k_prime
/// subsets, via best-first branch and bound over device inclusion. Ties are
/// broken toward the lexicographically smallest selected set.
ScheduleDecision solve_schedule(const metrics::DiscordanceMatrix &theta, int k_prime);

/// Plain exhaustive-enumeration minimizer with the same tie-break; reference
/// implementation kept as an oracle for solve_schedule.
ScheduleDecision enumerate_schedule(const metrics::DiscordanceMatrix &theta, int k_prime);

/// Uniformly random size-k_prime subset. If theta is given, the decision's
/// objective is evaluated against it; otherwise it is 0.
ScheduleDecision random_schedule(Substream &rng, int k, int k_prime,
                                 const metrics::DiscordanceMatrix *theta = nullptr);

} // namespace beamwave::scheduler
