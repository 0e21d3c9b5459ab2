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

#include "beamwave/channel.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace beamwave::channel
{

CVector array_response(double angle, int n, double spacing_ratio)
{
    if (n < 1)
    {
        throw std::invalid_argument("array_response: element count must be positive");
    }
    CVector a(n);
    const double phase_step = -2.0 * M_PI * spacing_ratio * std::cos(angle);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
    {
        a(i) = std::polar(scale, phase_step * static_cast<double>(i));
    }
    return a;
}

ChannelMatrix channel_from_paths(const ArrayGeometry &geom, std::vector<PathParams> paths)
{
    if (paths.empty())
    {
        throw std::invalid_argument("channel_from_paths: at least one path required");
    }
    if (geom.n_rx < 1 || geom.n_tx < 1)
    {
        throw std::invalid_argument("channel_from_paths: array dimensions must be positive");
    }
    const double scale =
        std::sqrt(static_cast<double>(geom.n_rx) * static_cast<double>(geom.n_tx) /
                  static_cast<double>(paths.size()));
    CMatrix h = CMatrix::Zero(geom.n_rx, geom.n_tx);
    for (const PathParams &p : paths)
    {
        const CVector a_rx = array_response(p.aoa, geom.n_rx, geom.spacing_ratio);
        const CVector a_tx = array_response(p.aod, geom.n_tx, geom.spacing_ratio);
        h.noalias() += (scale * p.gain) * (a_rx * a_tx.adjoint());
    }
    return ChannelMatrix{std::move(h), std::move(paths)};
}

ChannelMatrix generate_channel(Substream &rng, const ArrayGeometry &geom, int path_count,
                               const AngleInterval &aoa_range, const AngleInterval &aod_range)
{
    if (path_count < 1)
    {
        throw std::invalid_argument("generate_channel: path count must be positive");
    }
    std::vector<PathParams> paths(static_cast<std::size_t>(path_count));
    for (PathParams &p : paths)
    {
        p.gain = rng.complex_normal();
        p.aoa = rng.uniform(aoa_range.lo, aoa_range.hi);
        p.aod = rng.uniform(aod_range.lo, aod_range.hi);
    }
    return channel_from_paths(geom, std::move(paths));
}

namespace
{
// FNV-1a over raw bytes.
std::uint64_t fnv1a(const void *data, std::size_t size, std::uint64_t h)
{
    const auto *bytes = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < size; ++i)
    {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace

std::uint64_t fingerprint(const ChannelMatrix &h)
{
    std::uint64_t acc = 0xcbf29ce484222325ULL;
    acc = fnv1a(h.entries.data(), sizeof(Complex) * static_cast<std::size_t>(h.entries.size()), acc);
    return acc;
}

std::uint64_t fingerprint(const std::vector<ChannelMatrix> &set)
{
    std::uint64_t acc = 0xcbf29ce484222325ULL;
    for (const ChannelMatrix &h : set)
    {
        const std::uint64_t one = fingerprint(h);
        acc = fnv1a(&one, sizeof(one), acc);
    }
    return acc;
}

void write_channel_dump(std::ostream &os, const std::vector<ChannelDumpRecord> &records)
{
    os << "device,seed,n_rx,n_tx,spacing_ratio,path,gain_re,gain_im,aoa,aod\n";
    os.precision(17);
    for (const ChannelDumpRecord &rec : records)
    {
        for (std::size_t p = 0; p < rec.paths.size(); ++p)
        {
            const PathParams &path = rec.paths[p];
            os << rec.device << ',' << rec.seed << ',' << rec.geom.n_rx << ',' << rec.geom.n_tx
               << ',' << rec.geom.spacing_ratio << ',' << p << ',' << path.gain.real() << ','
               << path.gain.imag() << ',' << path.aoa << ',' << path.aod << '\n';
        }
    }
}

std::vector<ChannelDumpRecord> read_channel_dump(std::istream &is)
{
    std::vector<ChannelDumpRecord> records;
    std::string line;
    if (!std::getline(is, line))
    {
        throw std::invalid_argument("channel dump: missing header");
    }
    while (std::getline(is, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::istringstream row(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(row, field, ','))
            {
                throw std::invalid_argument("channel dump: truncated row: " + line);
            }
            return field;
        };
        ChannelDumpRecord rec;
        rec.device = std::stoi(next());
        rec.seed = std::stoull(next());
        rec.geom.n_rx = std::stoi(next());
        rec.geom.n_tx = std::stoi(next());
        rec.geom.spacing_ratio = std::stod(next());
        const std::size_t path_index = std::stoul(next());
        PathParams path;
        const double gain_re = std::stod(next());
        const double gain_im = std::stod(next());
        path.gain = Complex(gain_re, gain_im);
        path.aoa = std::stod(next());
        path.aod = std::stod(next());

        if (records.empty() || records.back().device != rec.device)
        {
            records.push_back(rec);
        }
        ChannelDumpRecord &target = records.back();
        if (path_index != target.paths.size())
        {
            throw std::invalid_argument("channel dump: path rows out of order");
        }
        target.paths.push_back(path);
    }
    return records;
}

} // namespace beamwave::channel
