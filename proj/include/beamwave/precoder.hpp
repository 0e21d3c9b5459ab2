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

#include <vector>

#include "beamwave/combiner.hpp"
#include "beamwave/config.hpp"
#include "beamwave/scheduler.hpp"
#include "beamwave/types.hpp"

namespace beamwave::precoder
{

/// Per-device effective channel after combining: g = H^H w, together with the
/// combiner's squared norm (the receive noise power is sigma2 * w_norm2; it is
/// carried explicitly rather than assumed equal to the power budget).
struct EffectiveChannel
{
    CVector g;
    double w_norm2 = 0.0;
};

/// Warm start for the max-min program: zero-forcing unicast directions scaled
/// by the powers of an interference-minimizing allocation, the multicast
/// eigen-direction, and the implied auxiliary values.
struct InitialPoint
{
    std::vector<CVector> b0; ///< unicast precoders, ordered like schedule.selected
    CVector m0;              ///< multicast precoder
    std::vector<double> t0;  ///< per scheduled device: interference + noise
    double alpha0 = 0.0;     ///< min unicast SINR at the warm start
    std::vector<double> a_unicast; ///< unicast powers (linear mW)
    double a_multicast = 0.0;      ///< multicast power (linear mW)
};

/// Iterate of the convex-concave loop. The expansion data for the next
/// convexified subproblem are (b, m, alpha, interference_ub).
struct CcpState
{
    std::vector<CVector> b;
    CVector m;
    double alpha = 0.0;
    std::vector<double> signal_lb;        ///< lifted lower bounds on |g_k^H b_k|^2
    std::vector<double> interference_ub;  ///< lifted upper bounds on unicast interference + noise
    std::vector<double> multicast_lb;     ///< lifted lower bounds on |g_k^H m|^2, all devices
    std::vector<double> total_interf_ub;  ///< lifted upper bounds on total interference + noise
    int iteration = 0;
    std::vector<double> trace; ///< accepted alpha per iteration, starting at alpha0
};

/// Final beamforming design. W is attached by the calling pipeline (the
/// precoder stage works on effective channels only).
struct BeamformingSolution
{
    std::vector<combiner::Combiner> combiners;
    std::vector<CVector> b; ///< ordered like schedule.selected
    CVector m;
    double alpha = 0.0; ///< min unicast SINR attained by the returned precoders
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace; ///< accepted lifted alpha per iteration
};

std::vector<EffectiveChannel> effective_channels(const std::vector<channel::ChannelMatrix> &channels,
                                                 const std::vector<combiner::Combiner> &combiners);

/// Unit-norm directions nulling every cross pair: g_k^H b_j = 0 for j != k.
/// Throws SingularConfigurationError when the stacked effective channels are
/// numerically rank deficient.
std::vector<CVector> zero_forcing_directions(const std::vector<EffectiveChannel> &g_scheduled);

/// Unit-norm dominant eigenvector of the aggregate outer product
/// sum_k g_k g_k^H over all devices (the multicast warm-start direction).
CVector aggregate_multicast_direction(const std::vector<EffectiveChannel> &g_all);

/// Unit-norm multicast direction guaranteed to cover every device: the
/// aggregate eigen-direction when it meets the QoS threshold at full power,
/// otherwise a max-min refinement of it (a device can land nearly orthogonal
/// to the plain eigen-direction on rare realizations). Throws
/// ScenarioInfeasibleError when no refinement reaches the threshold.
CVector multicast_cover_direction(const std::vector<EffectiveChannel> &g_all,
                                  const harness::SystemConfig &cfg);

/// Appendix-style warm start: zero-forcing directions, multicast
/// eigen-direction, and a power allocation from a linear program minimizing
/// total unicast interference under the multicast QoS and power budget.
/// Throws ScenarioInfeasibleError when the QoS threshold is unattainable.
InitialPoint build_initial_point(const std::vector<EffectiveChannel> &g_all,
                                 const scheduler::ScheduleDecision &schedule,
                                 const harness::SystemConfig &cfg);

/// One convexified subproblem solved at the state's expansion point.
CcpState ccp_step(const CcpState &state, const std::vector<EffectiveChannel> &g_all,
                  const scheduler::ScheduleDecision &schedule, const harness::SystemConfig &cfg);

/// Full max-min unicast design under the multicast QoS constraint: warm start
/// plus the convex-concave loop until |alpha_l - alpha_{l-1}| <= epsilon or
/// n_conv iterations. Steps are accepted only if they do not decrease alpha,
/// so the trace is non-decreasing; a rejected step means the ascent has
/// saturated at solver precision and the loop stops as converged.
BeamformingSolution solve_precoders(const std::vector<EffectiveChannel> &g_all,
                                    const scheduler::ScheduleDecision &schedule,
                                    const harness::SystemConfig &cfg);

/// Max-min unicast design with no multicast layer (orthogonal-window
/// baseline): the multicast constraint set is dropped and the full power
/// budget goes to the unicast precoders.
BeamformingSolution solve_unicast_precoders(const std::vector<EffectiveChannel> &g_all,
                                            const scheduler::ScheduleDecision &schedule,
                                            const harness::SystemConfig &cfg);

/// Constraint slacks of a candidate design evaluated with the original
/// quotient SINR forms (not the lifted variables).
struct FeasibilityReport
{
    double min_unicast_sinr = 0.0;   ///< over scheduled devices
    double min_multicast_sinr = 0.0; ///< over all devices
    double total_power = 0.0;        ///< sum ||b||^2 + ||m||^2 (mW)
};

FeasibilityReport verify_design(const std::vector<EffectiveChannel> &g_all,
                                const scheduler::ScheduleDecision &schedule,
                                const std::vector<CVector> &b, const CVector &m,
                                const harness::SystemConfig &cfg);

} // namespace beamwave::precoder
