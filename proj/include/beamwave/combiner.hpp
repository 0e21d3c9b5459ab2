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

#include "beamwave/channel.hpp"
#include "beamwave/types.hpp"

namespace beamwave::combiner
{

/// Finite-resolution constant-modulus phase codebook: l_rx equally spaced
/// phase rotations of modulus delta_rx = sqrt(P_rx / N_rx).
struct PhaseCodebook
{
    int l_rx = 16;
    double delta_rx = 1.0;

    static PhaseCodebook for_receive_power(double p_rx_mw, int n_rx, int l_rx)
    {
        return PhaseCodebook{l_rx, std::sqrt(p_rx_mw / static_cast<double>(n_rx))};
    }

    Complex element(int i) const
    {
        return std::polar(delta_rx, 2.0 * M_PI * static_cast<double>(i) /
                                        static_cast<double>(l_rx));
    }
};

/// Receive beamforming vector; every element lies in the phase codebook, so
/// the squared norm equals the receive power budget.
struct Combiner
{
    CVector w;
};

/// Dominant eigenvector of H H^H via power iteration (residual tolerance
/// 1e-10, iteration cap 1e4). The global phase is fixed by rotating the
/// largest-magnitude element to be real positive.
CVector principal_eigvec(const channel::ChannelMatrix &h);

/// Projects the dominant eigenvector onto the codebook: element l takes the
/// codebook phase maximizing Re{phi^* r_l}, ties resolved to the smaller
/// phase index.
Combiner design_combiner(const channel::ChannelMatrix &h, const PhaseCodebook &codebook);

} // namespace beamwave::combiner
