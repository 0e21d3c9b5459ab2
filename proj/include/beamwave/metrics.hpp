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

#include <iosfwd>
#include <string>
#include <vector>

#include "beamwave/channel.hpp"
#include "beamwave/types.hpp"

namespace beamwave::metrics
{

enum class MetricTag
{
    kCorr,
    kPawn,
    kRook,
    kKing,
};

/// Which pairwise discordance metric to evaluate. `omega` weighs the channel
/// energy component against the correlation component (ROOK and KING only).
struct MetricKind
{
    MetricTag tag = MetricTag::kKing;
    double omega = 0.5;
};

std::string to_string(MetricTag tag);
MetricTag metric_tag_from_string(const std::string &name);

/// Symmetric K x K matrix of pairwise discordance values with zero diagonal.
struct DiscordanceMatrix
{
    RMatrix values;

    int size() const { return static_cast<int>(values.rows()); }
};

/// Pairwise discordance between two devices' channels.
///
/// CORR: normalized magnitude of the vectorized-channel inner product.
/// PAWN: mean normalized row-pair correlation over all n_rx^2 row pairs.
/// ROOK: omega * |e_j - e_l| / (e_j + e_l) + (1 - omega) * PAWN.
/// KING: omega * ((e_max - e_j)/e_max + (e_max - e_l)/e_max) + (1 - omega) * PAWN,
///       where e = Frobenius energy and e_max is the population maximum
///       (required positive for KING only).
///
/// The evaluation order is arranged so that swapping the two channels yields
/// a bit-identical result.
double pairwise_metric(const MetricKind &kind, const channel::ChannelMatrix &h_j,
                       const channel::ChannelMatrix &h_l, double e_max = 0.0);

/// Full discordance matrix over a device population; e_max for KING is the
/// maximum Frobenius energy over all K devices, computed internally.
DiscordanceMatrix discordance_matrix(const std::vector<channel::ChannelMatrix> &channels,
                                     const MetricKind &kind);

/// CSV export/import of the full symmetric matrix, row-major.
void write_csv(std::ostream &os, const DiscordanceMatrix &theta);
DiscordanceMatrix read_csv(std::istream &is);

} // namespace beamwave::metrics
