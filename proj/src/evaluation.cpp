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

#include "beamwave/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamwave/errors.hpp"

namespace beamwave::evaluation
{

std::string to_string(const SchemeKind &scheme)
{
    switch (scheme.tag)
    {
    case SchemeTag::kXhaus:
        return "XHAUS";
    case SchemeTag::kRandom:
        return "RANDOM";
    case SchemeTag::kBeamwave:
    {
        std::string name = metrics::to_string(scheme.metric.tag);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        return "BEAMWAVE-" + name;
    }
    case SchemeTag::kTdm:
    {
        const int pct = static_cast<int>(std::lround(scheme.unicast_share * 100.0));
        return "TDM-" + std::to_string(pct);
    }
    }
    return "?";
}

SchemeKind scheme_from_string(const std::string &name, double omega)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    SchemeKind scheme;
    scheme.metric.omega = omega;
    if (lower == "xhaus")
    {
        scheme.tag = SchemeTag::kXhaus;
        return scheme;
    }
    if (lower == "random")
    {
        scheme.tag = SchemeTag::kRandom;
        return scheme;
    }
    if (lower.rfind("beamwave-", 0) == 0)
    {
        scheme.tag = SchemeTag::kBeamwave;
        scheme.metric.tag = metrics::metric_tag_from_string(lower.substr(9));
        return scheme;
    }
    if (lower.rfind("tdm-", 0) == 0)
    {
        scheme.tag = SchemeTag::kTdm;
        scheme.metric.tag = metrics::MetricTag::kKing;
        const double pct = std::stod(lower.substr(4));
        if (!(pct > 0.0 && pct < 100.0))
        {
            throw std::invalid_argument("TDM unicast share must lie strictly between 0 and 100%");
        }
        scheme.unicast_share = pct / 100.0;
        return scheme;
    }
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::pair<std::vector<double>, std::vector<double>>
evaluate_sinrs(const std::vector<channel::ChannelMatrix> &channels,
               const precoder::BeamformingSolution &solution,
               const scheduler::ScheduleDecision &schedule, double sigma2_mw)
{
    const int k = static_cast<int>(channels.size());
    const int kp = schedule.k_prime();
    if (schedule.k() != k || static_cast<int>(solution.combiners.size()) != k ||
        static_cast<int>(solution.b.size()) != kp)
    {
        throw std::invalid_argument("evaluate_sinrs: dimension mismatch");
    }

    // Combined gains w^H H b for every device x beam.
    std::vector<std::vector<Complex>> unicast_gain(static_cast<std::size_t>(k));
    std::vector<Complex> multicast_gain(static_cast<std::size_t>(k));
    std::vector<double> noise(static_cast<std::size_t>(k));
    for (int d = 0; d < k; ++d)
    {
        const CVector &w = solution.combiners[static_cast<std::size_t>(d)].w;
        if (w.size() != channels[static_cast<std::size_t>(d)].entries.rows())
        {
            throw std::invalid_argument("evaluate_sinrs: combiner length mismatch");
        }
        const Eigen::RowVectorXcd row = w.adjoint() * channels[static_cast<std::size_t>(d)].entries;
        unicast_gain[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(kp));
        for (int j = 0; j < kp; ++j)
        {
            if (solution.b[static_cast<std::size_t>(j)].size() !=
                channels[static_cast<std::size_t>(d)].entries.cols())
            {
                throw std::invalid_argument("evaluate_sinrs: precoder length mismatch");
            }
            unicast_gain[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)] =
                (row * solution.b[static_cast<std::size_t>(j)])(0);
        }
        multicast_gain[static_cast<std::size_t>(d)] =
            solution.m.size() > 0 ? Complex((row * solution.m)(0)) : Complex(0.0, 0.0);
        noise[static_cast<std::size_t>(d)] = sigma2_mw * w.squaredNorm();
    }

    std::vector<double> multicast_sinrs(static_cast<std::size_t>(k));
    for (int d = 0; d < k; ++d)
    {
        double denom = noise[static_cast<std::size_t>(d)];
        for (int j = 0; j < kp; ++j)
        {
            denom += std::norm(unicast_gain[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)]);
        }
        multicast_sinrs[static_cast<std::size_t>(d)] =
            std::norm(multicast_gain[static_cast<std::size_t>(d)]) / denom;
    }

    std::vector<double> unicast_sinrs(static_cast<std::size_t>(kp));
    for (int i = 0; i < kp; ++i)
    {
        const int device = schedule.selected[static_cast<std::size_t>(i)];
        double denom = noise[static_cast<std::size_t>(device)];
        for (int j = 0; j < kp; ++j)
        {
            if (j != i)
            {
                denom += std::norm(
                    unicast_gain[static_cast<std::size_t>(device)][static_cast<std::size_t>(j)]);
            }
        }
        unicast_sinrs[static_cast<std::size_t>(i)] =
            std::norm(unicast_gain[static_cast<std::size_t>(device)][static_cast<std::size_t>(i)]) /
            denom;
    }

    return {std::move(multicast_sinrs), std::move(unicast_sinrs)};
}

double spectral_efficiency(const std::vector<double> &unicast_sinrs, double time_share)
{
    double se = 0.0;
    for (double sinr : unicast_sinrs)
    {
        se += std::log2(1.0 + sinr);
    }
    return time_share * se;
}

namespace
{

double binomial_or_cap(int k, int k_prime, double cap)
{
    double count = 1.0;
    for (int i = 0; i < k_prime; ++i)
    {
        count *= static_cast<double>(k - i) / static_cast<double>(i + 1);
        if (count > cap)
        {
            return count;
        }
    }
    return count;
}

std::vector<combiner::Combiner> design_combiners(const std::vector<channel::ChannelMatrix> &channels,
                                                 const harness::SystemConfig &cfg)
{
    const combiner::PhaseCodebook codebook =
        combiner::PhaseCodebook::for_receive_power(cfg.p_rx_mw(), cfg.n_rx, cfg.l_rx);
    std::vector<combiner::Combiner> out;
    out.reserve(channels.size());
    for (const channel::ChannelMatrix &h : channels)
    {
        out.push_back(combiner::design_combiner(h, codebook));
    }
    return out;
}

/// Shared tail of every pipeline: evaluate SINRs from the raw channels and
/// re-verify the original feasibility constraints on the reported design.
ScenarioResult finish_layered(const std::vector<channel::ChannelMatrix> &channels,
                              const harness::SystemConfig &cfg, const SchemeKind &scheme,
                              const scheduler::ScheduleDecision &schedule,
                              precoder::BeamformingSolution solution)
{
    ScenarioResult result;
    result.scheme = scheme;
    result.selected = schedule.selected;
    auto [multicast_sinrs, unicast_sinrs] =
        evaluate_sinrs(channels, solution, schedule, cfg.sigma2_mw());
    result.multicast_sinrs = std::move(multicast_sinrs);
    result.unicast_sinrs = std::move(unicast_sinrs);
    result.min_unicast_sinr =
        *std::min_element(result.unicast_sinrs.begin(), result.unicast_sinrs.end());
    result.unicast_se = spectral_efficiency(result.unicast_sinrs, 1.0);
    result.iterations = solution.iterations;

    double power = solution.m.size() > 0 ? solution.m.squaredNorm() : 0.0;
    for (const CVector &bk : solution.b)
    {
        power += bk.squaredNorm();
    }
    const double min_multicast =
        *std::min_element(result.multicast_sinrs.begin(), result.multicast_sinrs.end());
    result.feasible = min_multicast >= cfg.gamma_min * (1.0 - 1e-6) &&
                      power <= cfg.p_tx_mw() * (1.0 + 1e-9);
    return result;
}

ScenarioResult run_pipeline(const std::vector<channel::ChannelMatrix> &channels,
                            const harness::SystemConfig &cfg, const SchemeKind &scheme,
                            const scheduler::ScheduleDecision &schedule)
{
    std::vector<combiner::Combiner> combiners = design_combiners(channels, cfg);
    const std::vector<precoder::EffectiveChannel> g =
        precoder::effective_channels(channels, combiners);
    precoder::BeamformingSolution solution = precoder::solve_precoders(g, schedule, cfg);
    solution.combiners = std::move(combiners);
    return finish_layered(channels, cfg, scheme, schedule, std::move(solution));
}

ScenarioResult run_tdm(const std::vector<channel::ChannelMatrix> &channels,
                       const harness::SystemConfig &cfg, const SchemeKind &scheme)
{
    // Schedule the unicast window with the regular discordance machinery.
    const metrics::DiscordanceMatrix theta = metrics::discordance_matrix(channels, scheme.metric);
    const scheduler::ScheduleDecision schedule = scheduler::solve_schedule(theta, cfg.k_prime);

    std::vector<combiner::Combiner> combiners = design_combiners(channels, cfg);
    const std::vector<precoder::EffectiveChannel> g =
        precoder::effective_channels(channels, combiners);

    // Multicast window: the covering multicast direction carries the full
    // power budget and faces no unicast interference. Any realization whose
    // layered warm start is feasible passes this check, since the warm start
    // already meets the threshold at lower power under interference.
    const CVector m_tdm = std::sqrt(cfg.p_tx_mw()) * precoder::multicast_cover_direction(g, cfg);
    double multicast_slack = -std::numeric_limits<double>::infinity();
    for (const precoder::EffectiveChannel &ec : g)
    {
        const double snr =
            std::norm((ec.g.adjoint() * m_tdm)(0)) / (cfg.sigma2_mw() * ec.w_norm2);
        multicast_slack = std::max(multicast_slack, cfg.gamma_min - snr);
    }
    if (multicast_slack > cfg.gamma_min * 1e-6)
    {
        throw ScenarioInfeasibleError("tdm-multicast-qos", multicast_slack);
    }

    // Unicast window: max-min design with the full budget and no multicast
    // constraint set.
    precoder::BeamformingSolution unicast = precoder::solve_unicast_precoders(g, schedule, cfg);
    unicast.combiners = combiners;

    ScenarioResult result;
    result.scheme = scheme;
    result.selected = schedule.selected;

    // Per-window SINRs: the multicast window has no unicast layer and the
    // unicast window no multicast layer.
    precoder::BeamformingSolution multicast_window;
    multicast_window.combiners = combiners;
    multicast_window.b.assign(static_cast<std::size_t>(cfg.k_prime),
                              CVector::Zero(cfg.n_tx));
    multicast_window.m = m_tdm;
    auto [multicast_sinrs, ignored] =
        evaluate_sinrs(channels, multicast_window, schedule, cfg.sigma2_mw());
    (void)ignored;
    result.multicast_sinrs = std::move(multicast_sinrs);

    auto [no_multicast, unicast_sinrs] = evaluate_sinrs(channels, unicast, schedule, cfg.sigma2_mw());
    (void)no_multicast;
    result.unicast_sinrs = std::move(unicast_sinrs);
    result.min_unicast_sinr =
        *std::min_element(result.unicast_sinrs.begin(), result.unicast_sinrs.end());
    result.unicast_se = spectral_efficiency(result.unicast_sinrs, scheme.unicast_share);
    result.iterations = unicast.iterations;

    double power = 0.0;
    for (const CVector &bk : unicast.b)
    {
        power += bk.squaredNorm();
    }
    const double min_multicast =
        *std::min_element(result.multicast_sinrs.begin(), result.multicast_sinrs.end());
    result.feasible = min_multicast >= cfg.gamma_min * (1.0 - 1e-6) &&
                      power <= cfg.p_tx_mw() * (1.0 + 1e-9) &&
                      m_tdm.squaredNorm() <= cfg.p_tx_mw() * (1.0 + 1e-9);
    return result;
}

} // namespace

ScenarioResult run_scheme(const std::vector<channel::ChannelMatrix> &channels,
                          const harness::SystemConfig &cfg, const SchemeKind &scheme,
                          Substream &rng)
{
    if (static_cast<int>(channels.size()) != cfg.k)
    {
        throw std::invalid_argument("run_scheme: channel count does not match cfg.k");
    }
    if (cfg.k_prime > cfg.k || cfg.k_prime > cfg.n_tx || cfg.k_prime < 1)
    {
        throw std::invalid_argument("run_scheme: need 1 <= k_prime <= min(k, n_tx)");
    }

    const auto started = std::chrono::steady_clock::now();
    ScenarioResult result;
    switch (scheme.tag)
    {
    case SchemeTag::kBeamwave:
    {
        const metrics::DiscordanceMatrix theta =
            metrics::discordance_matrix(channels, scheme.metric);
        const scheduler::ScheduleDecision schedule = scheduler::solve_schedule(theta, cfg.k_prime);
        result = run_pipeline(channels, cfg, scheme, schedule);
        break;
    }
    case SchemeTag::kRandom:
    {
        const scheduler::ScheduleDecision schedule =
            scheduler::random_schedule(rng, cfg.k, cfg.k_prime);
        result = run_pipeline(channels, cfg, scheme, schedule);
        break;
    }
    case SchemeTag::kXhaus:
    {
        const double subsets = binomial_or_cap(cfg.k, cfg.k_prime, cfg.xhaus_cap);
        if (subsets > static_cast<double>(cfg.xhaus_cap))
        {
            throw std::invalid_argument("run_scheme: exhaustive search over " +
                                        std::to_string(subsets) +
                                        " subsets exceeds the configured cap");
        }
        bool have_best = false;
        ScenarioResult best;
        scheduler::for_each_subset(cfg.k, cfg.k_prime, [&](const std::vector<int> &subset) {
            const scheduler::ScheduleDecision schedule =
                scheduler::decision_from_subset(subset, cfg.k, nullptr);
            const ScenarioResult candidate = run_pipeline(channels, cfg, scheme, schedule);
            if (!have_best || candidate.min_unicast_sinr > best.min_unicast_sinr)
            {
                have_best = true;
                best = candidate;
            }
        });
        result = std::move(best);
        break;
    }
    case SchemeTag::kTdm:
        result = run_tdm(channels, cfg, scheme);
        break;
    }
    result.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    return result;
}

} // namespace beamwave::evaluation
