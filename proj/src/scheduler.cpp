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

#include "beamwave/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "beamwave/errors.hpp"

namespace beamwave::scheduler
{

namespace
{

void check_args(int k, int k_prime)
{
    if (k_prime < 1 || k_prime > k)
    {
        throw std::invalid_argument("scheduler: k_prime must satisfy 1 <= k_prime <= k");
    }
}

} // namespace

double subset_cost(const metrics::DiscordanceMatrix &theta, const std::vector<int> &subset)
{
    double cost = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a)
    {
        for (std::size_t b = a + 1; b < subset.size(); ++b)
        {
            cost += theta.values(subset[a], subset[b]);
        }
    }
    return cost;
}

ScheduleDecision decision_from_subset(std::vector<int> selected, int k,
                                      const metrics::DiscordanceMatrix *theta)
{
    std::sort(selected.begin(), selected.end());
    ScheduleDecision d;
    d.mu.assign(static_cast<std::size_t>(k), 0);
    for (int idx : selected)
    {
        if (idx < 0 || idx >= k)
        {
            throw std::invalid_argument("decision_from_subset: device index out of range");
        }
        d.mu[static_cast<std::size_t>(idx)] = 1;
    }
    d.nu.assign(static_cast<std::size_t>(k * (k - 1) / 2), 0);
    for (int j = 0; j < k; ++j)
    {
        for (int l = j + 1; l < k; ++l)
        {
            d.nu[static_cast<std::size_t>(pair_index(k, j, l))] =
                static_cast<std::uint8_t>(d.mu[j] * d.mu[l]);
        }
    }
    d.objective = theta != nullptr ? subset_cost(*theta, selected) : 0.0;
    d.selected = std::move(selected);
    return d;
}

void for_each_subset(int k, int k_prime, const std::function<void(const std::vector<int> &)> &fn)
{
    check_args(k, k_prime);
    std::vector<int> subset(static_cast<std::size_t>(k_prime));
    for (int i = 0; i < k_prime; ++i)
    {
        subset[static_cast<std::size_t>(i)] = i;
    }
    while (true)
    {
        fn(subset);
        // Advance to the next combination in lexicographic order.
        int i = k_prime - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == k - k_prime + i)
        {
            --i;
        }
        if (i < 0)
        {
            break;
        }
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k_prime; ++j)
        {
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

ScheduleDecision enumerate_schedule(const metrics::DiscordanceMatrix &theta, int k_prime)
{
    const int k = theta.size();
    check_args(k, k_prime);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_subset;
    for_each_subset(k, k_prime, [&](const std::vector<int> &subset) {
        const double cost = subset_cost(theta, subset);
        if (cost < best)
        {
            best = cost;
            best_subset = subset;
        }
    });
    return decision_from_subset(std::move(best_subset), k, &theta);
}

namespace
{

/// Depth-first branch and bound over device inclusion, visiting complete
/// subsets in lexicographic order so the first incumbent among ties is the
/// lexicographically smallest one. The bound adds, for each open slot, the
/// cheapest attainable link cost toward the devices already chosen.
class BranchAndBound
{
  public:
    BranchAndBound(const metrics::DiscordanceMatrix &theta, int k_prime)
        : theta_(theta), k_(theta.size()), k_prime_(k_prime)
    {
        chosen_.reserve(static_cast<std::size_t>(k_prime));
        link_cost_.assign(static_cast<std::size_t>(k_), 0.0);
    }

    ScheduleDecision run()
    {
        descend(0, 0.0);
        return decision_from_subset(std::move(best_subset_), k_, &theta_);
    }

  private:
    double lower_bound(int next, double cost) const
    {
        const int remaining = k_prime_ - static_cast<int>(chosen_.size());
        if (remaining == 0)
        {
            return cost;
        }
        // Cheapest `remaining` candidates by link cost to the chosen set;
        // pair costs among the new devices are nonnegative and ignored.
        scratch_.clear();
        for (int j = next; j < k_; ++j)
        {
            scratch_.push_back(link_cost_[static_cast<std::size_t>(j)]);
        }
        std::nth_element(scratch_.begin(), scratch_.begin() + (remaining - 1), scratch_.end());
        for (int i = 0; i < remaining; ++i)
        {
            cost += scratch_[static_cast<std::size_t>(i)];
        }
        return cost;
    }

    void descend(int next, double cost)
    {
        if (static_cast<int>(chosen_.size()) == k_prime_)
        {
            if (cost < best_cost_)
            {
                best_cost_ = cost;
                best_subset_ = chosen_;
            }
            return;
        }
        const int remaining = k_prime_ - static_cast<int>(chosen_.size());
        if (k_ - next < remaining)
        {
            return;
        }
        if (lower_bound(next, cost) >= best_cost_)
        {
            return;
        }
        // Include `next` first to keep the lexicographic visiting order.
        const double link = link_cost_[static_cast<std::size_t>(next)];
        chosen_.push_back(next);
        for (int j = 0; j < k_; ++j)
        {
            link_cost_[static_cast<std::size_t>(j)] += theta_.values(next, j);
        }
        descend(next + 1, cost + link);
        for (int j = 0; j < k_; ++j)
        {
            link_cost_[static_cast<std::size_t>(j)] -= theta_.values(next, j);
        }
        chosen_.pop_back();

        descend(next + 1, cost);
    }

    const metrics::DiscordanceMatrix &theta_;
    int k_;
    int k_prime_;
    std::vector<int> chosen_;
    std::vector<double> link_cost_; ///< sum of theta to chosen devices
    mutable std::vector<double> scratch_;
    double best_cost_ = std::numeric_limits<double>::infinity();
    std::vector<int> best_subset_;
};

} // namespace

ScheduleDecision solve_schedule(const metrics::DiscordanceMatrix &theta, int k_prime)
{
    const int k = theta.size();
    check_args(k, k_prime);
    ScheduleDecision d = BranchAndBound(theta, k_prime).run();
    // At an optimum with theta >= 0 the pair indicators coincide with the
    // products mu_j * mu_l; decision_from_subset builds nu that way, so the
    // identity is enforced on the output by construction. Validate it.
    for (int j = 0; j < k; ++j)
    {
        for (int l = j + 1; l < k; ++l)
        {
            if (d.nu[static_cast<std::size_t>(pair_index(k, j, l))] != d.mu[j] * d.mu[l])
            {
                throw InternalConsistencyError("solve_schedule: nu != mu_j * mu_l on output");
            }
        }
    }
    return d;
}

ScheduleDecision random_schedule(Substream &rng, int k, int k_prime,
                                 const metrics::DiscordanceMatrix *theta)
{
    check_args(k, k_prime);
    // Partial Fisher-Yates: the first k_prime entries form a uniform subset.
    std::vector<int> pool(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
    {
        pool[static_cast<std::size_t>(i)] = i;
    }
    for (int i = 0; i < k_prime; ++i)
    {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(k - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k_prime));
    return decision_from_subset(std::move(pool), k, theta);
}

} // namespace beamwave::scheduler
