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

#include "beamwave/channel.hpp"
#include "beamwave/types.hpp"

namespace beamwave::harness
{

/// Full scenario configuration. k, k_prime and n_tx are required; everything
/// else defaults to the reference simulation settings (3 paths, gamma_min 4,
/// sigma2 10 dBm, P_rx 0 dBm, omega 0.5, 20 CCP iterations, epsilon 1e-3,
/// 100 seeds).
struct SystemConfig
{
    int k = 0;       ///< total devices (required)
    int k_prime = 0; ///< dual-layer devices (required)
    int n_tx = 0;    ///< gNodeB antennas (required)
    int n_rx = 1;
    int l_rx = 16; ///< combiner phase resolution

    double p_tx_dbm = 35.0;
    double p_rx_dbm = 0.0;
    double sigma2_dbm = 10.0;
    double gamma_min = 4.0; ///< linear multicast SINR threshold
    double omega = 0.5;

    int n_conv = 20;
    double epsilon = 1e-3;

    int paths = 3;
    double spacing_ratio = 0.5;
    channel::AngleInterval aoa_range = channel::kDefaultAoaRange;
    channel::AngleInterval aod_range = channel::kDefaultAodRange;

    std::uint64_t master_seed = 1;
    int n_seeds = 100;

    int xhaus_cap = 10000; ///< refuse exhaustive search beyond this many subsets

    double p_tx_mw() const { return dbm_to_mw(p_tx_dbm); }
    double p_rx_mw() const { return dbm_to_mw(p_rx_dbm); }
    double sigma2_mw() const { return dbm_to_mw(sigma2_dbm); }

    channel::ArrayGeometry geometry() const
    {
        return channel::ArrayGeometry{n_tx, n_rx, spacing_ratio};
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const SystemConfig &) const = default;
};

} // namespace beamwave::harness
