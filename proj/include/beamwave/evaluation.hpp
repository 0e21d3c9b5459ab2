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

#include <string>
#include <utility>
#include <vector>

#include "beamwave/config.hpp"
#include "beamwave/metrics.hpp"
#include "beamwave/precoder.hpp"
#include "beamwave/rng.hpp"

namespace beamwave::evaluation
{

enum class SchemeTag
{
    kBeamwave, ///< discordance scheduling + full beamforming pipeline
    kRandom,   ///< uniformly random schedule + beamforming pipeline
    kXhaus,    ///< exhaustive search over all schedules, max-min winner
    kTdm,      ///< orthogonal time windows: multicast alone, then unicast alone
};

/// A benchmarked scheme. `metric` drives the schedule for BEAMWAVE and for
/// the TDM windows (TDM schedules its unicast window with the same machinery);
/// `unicast_share` is the TDM unicast window length T_u in (0,1).
struct SchemeKind
{
    SchemeTag tag = SchemeTag::kBeamwave;
    metrics::MetricKind metric{metrics::MetricTag::kKing, 0.5};
    double unicast_share = 0.0;
};

std::string to_string(const SchemeKind &scheme);
/// Parses names like "xhaus", "random", "beamwave-king", "tdm-75".
SchemeKind scheme_from_string(const std::string &name, double omega);

/// Outcome of one scheme on one channel realization.
struct ScenarioResult
{
    SchemeKind scheme;
    std::vector<int> selected;          ///< scheduled device indices
    double min_unicast_sinr = 0.0;      ///< linear, over scheduled devices
    std::vector<double> unicast_sinrs;  ///< per scheduled device
    std::vector<double> multicast_sinrs; ///< per device
    double unicast_se = 0.0;            ///< bps/Hz
    bool feasible = false;
    int iterations = 0;
    double runtime_ms = 0.0;
};

/// SINRs of a concrete design evaluated from the raw channels: the multicast
/// SINR at every device (unicast interference summed over the schedule) and
/// the unicast SINR at every scheduled device (perfect SIC of the multicast
/// layer). Returns (multicast_sinrs, unicast_sinrs).
std::pair<std::vector<double>, std::vector<double>>
evaluate_sinrs(const std::vector<channel::ChannelMatrix> &channels,
               const precoder::BeamformingSolution &solution,
               const scheduler::ScheduleDecision &schedule, double sigma2_mw);

/// time_share * sum_k log2(1 + SINR_k); time_share is 1 for layered
/// transmission and T_u for the TDM unicast window.
double spectral_efficiency(const std::vector<double> &unicast_sinrs, double time_share);

/// Runs one scheme end to end on a fixed channel realization.
ScenarioResult run_scheme(const std::vector<channel::ChannelMatrix> &channels,
                          const harness::SystemConfig &cfg, const SchemeKind &scheme,
                          Substream &rng);

} // namespace beamwave::evaluation
