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
#include <iosfwd>
#include <vector>

#include "beamwave/rng.hpp"
#include "beamwave/types.hpp"

namespace beamwave::channel
{

/// Uniform linear array dimensions at both link ends.
struct ArrayGeometry
{
    int n_tx = 1;                ///< transmit (gNodeB) antennas
    int n_rx = 1;                ///< receive (device) antennas
    double spacing_ratio = 0.5;  ///< element spacing over wavelength
};

/// One propagation path: complex gain plus angle of arrival / departure.
struct PathParams
{
    Complex gain;
    double aoa = 0.0; ///< radians
    double aod = 0.0; ///< radians
};

struct AngleInterval
{
    double lo;
    double hi;

    bool operator==(const AngleInterval &) const = default;
};

inline constexpr AngleInterval kDefaultAoaRange{-M_PI, M_PI};
inline constexpr AngleInterval kDefaultAodRange{-M_PI / 3.0, M_PI / 3.0};

/// Geometric channel matrix together with the path parameters it was built
/// from (the entries are reconstructible from the paths).
struct ChannelMatrix
{
    CMatrix entries; ///< n_rx x n_tx
    std::vector<PathParams> paths;

    int n_rx() const { return static_cast<int>(entries.rows()); }
    int n_tx() const { return static_cast<int>(entries.cols()); }
    double frobenius_energy() const { return entries.squaredNorm(); }
};

/// Unit-norm uniform-linear-array response vector. Element i (0-based) equals
/// exp(-j i 2 pi spacing_ratio cos(angle)) / sqrt(n).
CVector array_response(double angle, int n, double spacing_ratio);

/// Rebuilds the channel matrix of a geometry from explicit path parameters:
/// H = sqrt(n_rx n_tx / L) sum_l gain_l a_rx(aoa_l) a_tx(aod_l)^H.
ChannelMatrix channel_from_paths(const ArrayGeometry &geom, std::vector<PathParams> paths);

/// Draws a random geometric channel with `path_count` paths. Gains are
/// CN(0,1), angles uniform on the given intervals. Deterministic for a fixed
/// stream state; per path the draw order is gain (re, im), aoa, aod.
ChannelMatrix generate_channel(Substream &rng, const ArrayGeometry &geom, int path_count,
                               const AngleInterval &aoa_range = kDefaultAoaRange,
                               const AngleInterval &aod_range = kDefaultAodRange);

/// 64-bit fingerprint of the raw matrix entries (bit-exact identity check).
std::uint64_t fingerprint(const ChannelMatrix &h);
std::uint64_t fingerprint(const std::vector<ChannelMatrix> &set);

/// One record of the channel-dump replay format: the device's generating
/// seed, geometry and path list. `entries` are rebuilt on load.
struct ChannelDumpRecord
{
    int device = 0;
    std::uint64_t seed = 0;
    ArrayGeometry geom;
    std::vector<PathParams> paths;
};

/// CSV channel dump, one row per (device, path). Columns:
/// device,seed,n_rx,n_tx,spacing_ratio,path,gain_re,gain_im,aoa,aod
void write_channel_dump(std::ostream &os, const std::vector<ChannelDumpRecord> &records);
std::vector<ChannelDumpRecord> read_channel_dump(std::istream &is);

} // namespace beamwave::channel
