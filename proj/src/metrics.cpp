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

#include "beamwave/metrics.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace beamwave::metrics
{

std::string to_string(MetricTag tag)
{
    switch (tag)
    {
    case MetricTag::kCorr:
        return "corr";
    case MetricTag::kPawn:
        return "pawn";
    case MetricTag::kRook:
        return "rook";
    case MetricTag::kKing:
        return "king";
    }
    return "?";
}

MetricTag metric_tag_from_string(const std::string &name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "corr")
        return MetricTag::kCorr;
    if (lower == "pawn")
        return MetricTag::kPawn;
    if (lower == "rook")
        return MetricTag::kRook;
    if (lower == "king")
        return MetricTag::kKing;
    throw std::invalid_argument("unknown metric '" + name + "' (expected corr|pawn|rook|king)");
}

namespace
{

void check_dimensions(const channel::ChannelMatrix &a, const channel::ChannelMatrix &b)
{
    if (a.entries.rows() != b.entries.rows() || a.entries.cols() != b.entries.cols())
    {
        throw std::invalid_argument("pairwise_metric: channel dimensions differ");
    }
}

/// Normalized correlation of two complex vectors: |<a,b>| / (||a|| ||b||).
double normalized_correlation(const CMatrix &a, const CMatrix &b)
{
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0)
    {
        throw std::invalid_argument("normalized correlation undefined for a zero-norm channel");
    }
    const Complex inner = (a.conjugate().cwiseProduct(b)).sum();
    return std::abs(inner) / (na * nb);
}

double row_correlation(const channel::ChannelMatrix &h_j, int n1, const channel::ChannelMatrix &h_l,
                       int n2)
{
    const double na = h_j.entries.row(n1).norm();
    const double nb = h_l.entries.row(n2).norm();
    if (na == 0.0 || nb == 0.0)
    {
        throw std::invalid_argument("normalized correlation undefined for a zero-norm channel row");
    }
    const Complex inner = (h_j.entries.row(n1).conjugate().cwiseProduct(h_l.entries.row(n2))).sum();
    return std::abs(inner) / (na * nb);
}

/// Mean row-pair correlation. Terms are paired as (n1,n2)+(n2,n1) so that
/// swapping the two channels produces a bit-identical sum.
double pawn(const channel::ChannelMatrix &h_j, const channel::ChannelMatrix &h_l)
{
    const int n_rx = h_j.n_rx();
    double sum = 0.0;
    for (int n1 = 0; n1 < n_rx; ++n1)
    {
        sum += row_correlation(h_j, n1, h_l, n1);
        for (int n2 = n1 + 1; n2 < n_rx; ++n2)
        {
            sum += row_correlation(h_j, n1, h_l, n2) + row_correlation(h_j, n2, h_l, n1);
        }
    }
    return sum / (static_cast<double>(n_rx) * static_cast<double>(n_rx));
}

} // namespace

double pairwise_metric(const MetricKind &kind, const channel::ChannelMatrix &h_j,
                       const channel::ChannelMatrix &h_l, double e_max)
{
    check_dimensions(h_j, h_l);
    switch (kind.tag)
    {
    case MetricTag::kCorr:
        return normalized_correlation(h_j.entries, h_l.entries);
    case MetricTag::kPawn:
        return pawn(h_j, h_l);
    case MetricTag::kRook:
    {
        const double e_j = h_j.frobenius_energy();
        const double e_l = h_l.frobenius_energy();
        if (e_j + e_l == 0.0)
        {
            throw std::invalid_argument("ROOK undefined for two zero channels");
        }
        const double energy_term = std::abs(e_j - e_l) / (e_j + e_l);
        return kind.omega * energy_term + (1.0 - kind.omega) * pawn(h_j, h_l);
    }
    case MetricTag::kKing:
    {
        if (e_max <= 0.0)
        {
            throw std::invalid_argument("KING requires a positive population maximum energy");
        }
        const double e_j = h_j.frobenius_energy();
        const double e_l = h_l.frobenius_energy();
        const double deficit = (e_max - e_j) / e_max + (e_max - e_l) / e_max;
        return kind.omega * deficit + (1.0 - kind.omega) * pawn(h_j, h_l);
    }
    }
    throw std::invalid_argument("pairwise_metric: unknown metric tag");
}

DiscordanceMatrix discordance_matrix(const std::vector<channel::ChannelMatrix> &channels,
                                     const MetricKind &kind)
{
    const int k = static_cast<int>(channels.size());
    if (k < 2)
    {
        throw std::invalid_argument("discordance_matrix: need at least two channels");
    }
    for (const channel::ChannelMatrix &h : channels)
    {
        if (h.entries.rows() != channels.front().entries.rows() ||
            h.entries.cols() != channels.front().entries.cols())
        {
            throw std::invalid_argument("discordance_matrix: channel dimensions differ");
        }
    }
    double e_max = 0.0;
    for (const channel::ChannelMatrix &h : channels)
    {
        e_max = std::max(e_max, h.frobenius_energy());
    }
    DiscordanceMatrix theta;
    theta.values = RMatrix::Zero(k, k);
    for (int j = 0; j < k; ++j)
    {
        for (int l = j + 1; l < k; ++l)
        {
            const double v = pairwise_metric(kind, channels[j], channels[l], e_max);
            theta.values(j, l) = v;
            theta.values(l, j) = v;
        }
    }
    return theta;
}

void write_csv(std::ostream &os, const DiscordanceMatrix &theta)
{
    os.precision(17);
    const int k = theta.size();
    for (int j = 0; j < k; ++j)
    {
        for (int l = 0; l < k; ++l)
        {
            os << theta.values(j, l);
            os << (l + 1 == k ? '\n' : ',');
        }
    }
}

DiscordanceMatrix read_csv(std::istream &is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::istringstream row(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(row, field, ','))
        {
            values.push_back(std::stod(field));
        }
        rows.push_back(std::move(values));
    }
    const int k = static_cast<int>(rows.size());
    if (k < 2)
    {
        throw std::invalid_argument("discordance CSV: need at least a 2x2 matrix");
    }
    DiscordanceMatrix theta;
    theta.values = RMatrix::Zero(k, k);
    for (int j = 0; j < k; ++j)
    {
        if (static_cast<int>(rows[j].size()) != k)
        {
            throw std::invalid_argument("discordance CSV: matrix is not square");
        }
        for (int l = 0; l < k; ++l)
        {
            theta.values(j, l) = rows[j][l];
        }
    }
    return theta;
}

} // namespace beamwave::metrics
