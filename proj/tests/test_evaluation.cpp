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

#include "beamwave/evaluation.hpp"
#include "beamwave/harness.hpp"

using namespace beamwave;
using namespace beamwave::evaluation;

namespace
{

harness::SystemConfig paper_config(int k, int k_prime, int n_tx, int n_rx = 1)
{
    harness::SystemConfig cfg;
    cfg.k = k;
    cfg.k_prime = k_prime;
    cfg.n_tx = n_tx;
    cfg.n_rx = n_rx;
    cfg.l_rx = 16;
    cfg.p_tx_dbm = 35.0;
    cfg.validate();
    return cfg;
}

precoder::BeamformingSolution full_solution(const std::vector<channel::ChannelMatrix> &channels,
                                            const harness::SystemConfig &cfg,
                                            const scheduler::ScheduleDecision &schedule)
{
    const combiner::PhaseCodebook codebook =
        combiner::PhaseCodebook::for_receive_power(cfg.p_rx_mw(), cfg.n_rx, cfg.l_rx);
    std::vector<combiner::Combiner> combiners;
    for (const channel::ChannelMatrix &h : channels)
    {
        combiners.push_back(combiner::design_combiner(h, codebook));
    }
    const auto g = precoder::effective_channels(channels, combiners);
    precoder::BeamformingSolution sol = precoder::solve_precoders(g, schedule, cfg);
    sol.combiners = std::move(combiners);
    return sol;
}

} // namespace

TEST_CASE("scheme names round-trip through the parser")
{
    for (const char *name :
         {"XHAUS", "RANDOM", "BEAMWAVE-CORR", "BEAMWAVE-PAWN", "BEAMWAVE-ROOK", "BEAMWAVE-KING",
          "TDM-25", "TDM-50", "TDM-75"})
    {
        const SchemeKind scheme = scheme_from_string(name, 0.5);
        CHECK(to_string(scheme) == name);
    }
    CHECK_THROWS_AS(scheme_from_string("tdm-0", 0.5), std::invalid_argument);
    CHECK_THROWS_AS(scheme_from_string("beamwave-queen", 0.5), std::invalid_argument);
    CHECK_THROWS_AS(scheme_from_string("greedy", 0.5), std::invalid_argument);
}

TEST_CASE("zero unicast precoders give pure multicast SNRs and zero unicast SINRs")
{
    const harness::SystemConfig cfg = paper_config(3, 2, 8);
    const auto channels = harness::channels_for_seed(cfg, 5);
    const combiner::PhaseCodebook codebook =
        combiner::PhaseCodebook::for_receive_power(cfg.p_rx_mw(), cfg.n_rx, cfg.l_rx);
    precoder::BeamformingSolution sol;
    for (const channel::ChannelMatrix &h : channels)
    {
        sol.combiners.push_back(combiner::design_combiner(h, codebook));
    }
    sol.b.assign(2, CVector::Zero(8));
    Substream rng = Substream::derived(91, {0});
    CVector m(8);
    for (int i = 0; i < 8; ++i)
    {
        m(i) = rng.complex_normal();
    }
    sol.m = m;

    const auto schedule = scheduler::decision_from_subset({0, 2}, 3, nullptr);
    const auto [multicast, unicast] = evaluate_sinrs(channels, sol, schedule, cfg.sigma2_mw());
    for (int d = 0; d < 3; ++d)
    {
        const Complex gain = (sol.combiners[d].w.adjoint() * channels[d].entries * m)(0);
        const double expect =
            std::norm(gain) / (cfg.sigma2_mw() * sol.combiners[d].w.squaredNorm());
        CHECK(multicast[d] == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(unicast[0] == 0.0);
    CHECK(unicast[1] == 0.0);
}

TEST_CASE("a single scheduled device sees no unicast interference")
{
    const harness::SystemConfig cfg = paper_config(2, 1, 8);
    const auto channels = harness::channels_for_seed(cfg, 8);
    const auto schedule = scheduler::decision_from_subset({1}, 2, nullptr);
    const auto sol = full_solution(channels, cfg, schedule);
    const auto [multicast, unicast] = evaluate_sinrs(channels, sol, schedule, cfg.sigma2_mw());
    const Complex gain = (sol.combiners[1].w.adjoint() * channels[1].entries * sol.b[0])(0);
    const double expect = std::norm(gain) / (cfg.sigma2_mw() * sol.combiners[1].w.squaredNorm());
    CHECK(unicast[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("SINRs match an independent elementwise recomputation")
{
    const harness::SystemConfig cfg = paper_config(5, 3, 16);
    const auto channels = harness::channels_for_seed(cfg, 21);
    const metrics::DiscordanceMatrix theta =
        metrics::discordance_matrix(channels, {metrics::MetricTag::kKing, cfg.omega});
    const auto schedule = scheduler::solve_schedule(theta, 3);
    const auto sol = full_solution(channels, cfg, schedule);
    const auto [multicast, unicast] = evaluate_sinrs(channels, sol, schedule, cfg.sigma2_mw());

    // Straightforward second pass with explicit loops.
    for (int d = 0; d < 5; ++d)
    {
        Complex mc_gain(0.0, 0.0);
        for (int a = 0; a < channels[d].n_rx(); ++a)
        {
            for (int b = 0; b < channels[d].n_tx(); ++b)
            {
                mc_gain += std::conj(sol.combiners[d].w(a)) * channels[d].entries(a, b) * sol.m(b);
            }
        }
        double denom = cfg.sigma2_mw() * sol.combiners[d].w.squaredNorm();
        for (const CVector &bk : sol.b)
        {
            Complex gain(0.0, 0.0);
            for (int a = 0; a < channels[d].n_rx(); ++a)
            {
                for (int b = 0; b < channels[d].n_tx(); ++b)
                {
                    gain += std::conj(sol.combiners[d].w(a)) * channels[d].entries(a, b) * bk(b);
                }
            }
            denom += std::norm(gain);
        }
        CHECK(multicast[d] == doctest::Approx(std::norm(mc_gain) / denom).epsilon(1e-9));
    }
    for (int i = 0; i < 3; ++i)
    {
        const int device = schedule.selected[static_cast<std::size_t>(i)];
        double denom = cfg.sigma2_mw() * sol.combiners[device].w.squaredNorm();
        double signal = 0.0;
        for (int j = 0; j < 3; ++j)
        {
            const Complex gain =
                (sol.combiners[device].w.adjoint() * channels[device].entries * sol.b[j])(0);
            if (j == i)
            {
                signal = std::norm(gain);
            }
            else
            {
                denom += std::norm(gain);
            }
        }
        CHECK(unicast[i] == doctest::Approx(signal / denom).epsilon(1e-9));
    }
}

TEST_CASE("spectral efficiency is the time-shared sum of logs")
{
    CHECK(spectral_efficiency({1.0, 1.0, 1.0, 1.0}, 1.0) == doctest::Approx(4.0).epsilon(1e-12));
    const std::vector<double> sinrs{3.3, 0.7, 12.0};
    CHECK(spectral_efficiency(sinrs, 0.5) ==
          doctest::Approx(0.5 * spectral_efficiency(sinrs, 1.0)).epsilon(1e-12));
    CHECK(spectral_efficiency({}, 1.0) == 0.0);
}

TEST_CASE("exhaustive search equals the best of the explicit subsets")
{
    const harness::SystemConfig cfg = paper_config(4, 2, 8);
    const auto channels = harness::channels_for_seed(cfg, 33);
    Substream rng = Substream::derived(92, {0});
    const ScenarioResult xhaus =
        run_scheme(channels, cfg, scheme_from_string("xhaus", cfg.omega), rng);

    double best = 0.0;
    scheduler::for_each_subset(4, 2, [&](const std::vector<int> &subset) {
        const auto schedule = scheduler::decision_from_subset(subset, 4, nullptr);
        const auto sol = full_solution(channels, cfg, schedule);
        const auto [mc, uni] = evaluate_sinrs(channels, sol, schedule, cfg.sigma2_mw());
        best = std::max(best, *std::min_element(uni.begin(), uni.end()));
    });
    CHECK(xhaus.min_unicast_sinr == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("random scheme replays identically for a fixed stream")
{
    const harness::SystemConfig cfg = paper_config(5, 2, 8);
    const auto channels = harness::channels_for_seed(cfg, 41);
    Substream rng_a = Substream::derived(93, {1});
    Substream rng_b = Substream::derived(93, {1});
    const SchemeKind random_scheme = scheme_from_string("random", cfg.omega);
    const ScenarioResult a = run_scheme(channels, cfg, random_scheme, rng_a);
    const ScenarioResult b = run_scheme(channels, cfg, random_scheme, rng_b);
    CHECK(a.selected == b.selected);
    CHECK(a.min_unicast_sinr == b.min_unicast_sinr);
}

TEST_CASE("exhaustive search dominates every single-schedule scheme per realization")
{
    const harness::SystemConfig cfg = paper_config(5, 3, 8);
    for (int seed = 0; seed < 5; ++seed)
    {
        const auto channels = harness::channels_for_seed(cfg, seed);
        Substream rng = Substream::derived(94, {static_cast<std::uint64_t>(seed)});
        const ScenarioResult xhaus =
            run_scheme(channels, cfg, scheme_from_string("xhaus", cfg.omega), rng);
        for (const char *name : {"beamwave-king", "beamwave-rook", "random"})
        {
            Substream rng_s = Substream::derived(95, {static_cast<std::uint64_t>(seed)});
            const ScenarioResult r =
                run_scheme(channels, cfg, scheme_from_string(name, cfg.omega), rng_s);
            CHECK(xhaus.min_unicast_sinr >= r.min_unicast_sinr - 1e-6);
        }
    }
}

TEST_CASE("any layered-feasible realization is feasible for the TDM multicast window")
{
    const harness::SystemConfig cfg = paper_config(6, 3, 16);
    for (int seed = 0; seed < 10; ++seed)
    {
        const auto channels = harness::channels_for_seed(cfg, seed);
        Substream rng = Substream::derived(96, {static_cast<std::uint64_t>(seed)});
        const ScenarioResult king =
            run_scheme(channels, cfg, scheme_from_string("beamwave-king", cfg.omega), rng);
        REQUIRE(king.feasible);
        Substream rng_t = Substream::derived(97, {static_cast<std::uint64_t>(seed)});
        const ScenarioResult tdm =
            run_scheme(channels, cfg, scheme_from_string("tdm-50", cfg.omega), rng_t);
        CHECK(tdm.feasible);
        // The multicast window carries no unicast interference on top of the
        // full budget, so it clears the threshold with room.
        CHECK(*std::min_element(tdm.multicast_sinrs.begin(), tdm.multicast_sinrs.end()) >=
              cfg.gamma_min * (1.0 - 1e-6));
    }
}

TEST_CASE("TDM spectral efficiency scales with the unicast share")
{
    const harness::SystemConfig cfg = paper_config(4, 2, 8);
    const auto channels = harness::channels_for_seed(cfg, 55);
    Substream rng_a = Substream::derived(98, {0});
    Substream rng_b = Substream::derived(98, {0});
    const ScenarioResult t25 =
        run_scheme(channels, cfg, scheme_from_string("tdm-25", cfg.omega), rng_a);
    const ScenarioResult t75 =
        run_scheme(channels, cfg, scheme_from_string("tdm-75", cfg.omega), rng_b);
    CHECK(t75.unicast_se == doctest::Approx(3.0 * t25.unicast_se).epsilon(1e-9));
    CHECK(t25.min_unicast_sinr == doctest::Approx(t75.min_unicast_sinr).epsilon(1e-12));
}

TEST_CASE("feasible results re-verify the power and QoS constraints from raw channels")
{
    const harness::SystemConfig cfg = paper_config(5, 2, 8);
    const auto channels = harness::channels_for_seed(cfg, 61);
    Substream rng = Substream::derived(99, {0});
    const ScenarioResult result =
        run_scheme(channels, cfg, scheme_from_string("beamwave-pawn", cfg.omega), rng);
    REQUIRE(result.feasible);
    CHECK(*std::min_element(result.multicast_sinrs.begin(), result.multicast_sinrs.end()) >=
          cfg.gamma_min * (1.0 - 1e-6));
    CHECK(result.min_unicast_sinr ==
          doctest::Approx(*std::min_element(result.unicast_sinrs.begin(),
                                            result.unicast_sinrs.end()))
              .epsilon(1e-12));
}

TEST_CASE("the exhaustive-search cap rejects oversized instances")
{
    harness::SystemConfig cfg = paper_config(16, 4, 32);
    cfg.xhaus_cap = 100; // C(16,4) = 1820 exceeds this
    const auto channels = harness::channels_for_seed(cfg, 1);
    Substream rng = Substream::derived(100, {0});
    CHECK_THROWS_AS(run_scheme(channels, cfg, scheme_from_string("xhaus", cfg.omega), rng),
                    std::invalid_argument);
}

TEST_CASE("spectral efficiency grows with the device count at reference settings")
{
    // Two points of the device sweep, layered transmission with the strongest
    // metric; the mean spectral efficiency rises sharply with more scheduled
    // devices.
    harness::SystemConfig small = paper_config(8, 2, 32);
    small.p_tx_dbm = 45.0;
    harness::SystemConfig large = paper_config(12, 3, 32);
    large.p_tx_dbm = 45.0;
    const SchemeKind king = scheme_from_string("beamwave-king", 0.5);
    double se_small = 0.0, se_large = 0.0;
    const int seeds = 25;
    for (int seed = 0; seed < seeds; ++seed)
    {
        Substream rng_a = Substream::derived(101, {static_cast<std::uint64_t>(seed)});
        se_small += run_scheme(harness::channels_for_seed(small, seed), small, king, rng_a)
                        .unicast_se;
        Substream rng_b = Substream::derived(102, {static_cast<std::uint64_t>(seed)});
        se_large += run_scheme(harness::channels_for_seed(large, seed), large, king, rng_b)
                        .unicast_se;
    }
    CHECK(se_large / seeds > se_small / seeds);
}
