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

#include <sstream>

#include <doctest.h>

#include "beamwave/metrics.hpp"

using namespace beamwave;
using namespace beamwave::channel;
using namespace beamwave::metrics;

namespace
{

ChannelMatrix random_channel(Substream &rng, int n_rx, int n_tx, int paths = 3)
{
    return generate_channel(rng, ArrayGeometry{n_tx, n_rx, 0.5}, paths);
}

ChannelMatrix scaled(const ChannelMatrix &h, Complex factor)
{
    ChannelMatrix out = h;
    out.entries *= factor;
    return out;
}

} // namespace

TEST_CASE("CORR is scale invariant and one for aligned channels")
{
    Substream rng = Substream::derived(31, {0});
    const ChannelMatrix h = random_channel(rng, 2, 8);
    const ChannelMatrix h_scaled = scaled(h, Complex(-2.5, 1.75));
    const double corr = pairwise_metric({MetricTag::kCorr, 0.5}, h, h_scaled);
    CHECK(corr == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("PAWN equals CORR for single-antenna devices")
{
    Substream rng = Substream::derived(32, {0});
    for (int trial = 0; trial < 1000; ++trial)
    {
        const ChannelMatrix a = random_channel(rng, 1, 16);
        const ChannelMatrix b = random_channel(rng, 1, 16);
        const double corr = pairwise_metric({MetricTag::kCorr, 0.5}, a, b);
        const double pawn = pairwise_metric({MetricTag::kPawn, 0.5}, a, b);
        CHECK(std::abs(corr - pawn) <= 1e-12);
    }
}

TEST_CASE("ROOK with omega one vanishes for equal-energy channels")
{
    Substream rng = Substream::derived(33, {0});
    const ChannelMatrix a = random_channel(rng, 2, 8);
    ChannelMatrix b = random_channel(rng, 2, 8);
    b.entries *= std::sqrt(a.frobenius_energy() / b.frobenius_energy());
    const double rook = pairwise_metric({MetricTag::kRook, 1.0}, a, b);
    CHECK(rook == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(rook) < 1e-12);
}

TEST_CASE("KING with omega zero reduces exactly to PAWN")
{
    Substream rng = Substream::derived(34, {0});
    const ChannelMatrix a = random_channel(rng, 3, 8);
    const ChannelMatrix b = random_channel(rng, 3, 8);
    const double e_max = std::max(a.frobenius_energy(), b.frobenius_energy());
    const double pawn = pairwise_metric({MetricTag::kPawn, 0.5}, a, b);
    CHECK(pairwise_metric({MetricTag::kKing, 0.0}, a, b, e_max) == pawn);
    CHECK(pairwise_metric({MetricTag::kRook, 0.0}, a, b) == pawn);
}

TEST_CASE("KING with omega one vanishes when both devices hold the maximum energy")
{
    Substream rng = Substream::derived(35, {0});
    const ChannelMatrix a = random_channel(rng, 2, 8);
    ChannelMatrix b = random_channel(rng, 2, 8);
    b.entries *= std::sqrt(a.frobenius_energy() / b.frobenius_energy());
    const double e_max = a.frobenius_energy();
    const double king = pairwise_metric({MetricTag::kKing, 1.0}, a, b, e_max);
    CHECK(std::abs(king) < 1e-12);
}

TEST_CASE("pairwise metrics are exactly symmetric in the two devices")
{
    Substream rng = Substream::derived(36, {0});
    for (int trial = 0; trial < 50; ++trial)
    {
        const ChannelMatrix a = random_channel(rng, 3, 8);
        const ChannelMatrix b = random_channel(rng, 3, 8);
        const double e_max = std::max(a.frobenius_energy(), b.frobenius_energy());
        for (MetricTag tag : {MetricTag::kCorr, MetricTag::kPawn, MetricTag::kRook, MetricTag::kKing})
        {
            const MetricKind kind{tag, 0.5};
            CHECK(pairwise_metric(kind, a, b, e_max) == pairwise_metric(kind, b, a, e_max));
        }
    }
}

TEST_CASE("CORR and PAWN ignore complex scaling of either channel")
{
    Substream rng = Substream::derived(37, {0});
    const ChannelMatrix a = random_channel(rng, 2, 8);
    const ChannelMatrix b = random_channel(rng, 2, 8);
    const ChannelMatrix b2 = scaled(b, Complex(0.3, -4.0));
    for (MetricTag tag : {MetricTag::kCorr, MetricTag::kPawn})
    {
        const MetricKind kind{tag, 0.5};
        CHECK(std::abs(pairwise_metric(kind, a, b) - pairwise_metric(kind, a, b2)) < 1e-10);
    }
}

TEST_CASE("PAWN equals the mean of row-level correlations")
{
    Substream rng = Substream::derived(38, {0});
    const ChannelMatrix a = random_channel(rng, 4, 8);
    const ChannelMatrix b = random_channel(rng, 4, 8);
    double expect = 0.0;
    for (int n1 = 0; n1 < 4; ++n1)
    {
        for (int n2 = 0; n2 < 4; ++n2)
        {
            const Complex inner =
                (a.entries.row(n1).conjugate().cwiseProduct(b.entries.row(n2))).sum();
            expect += std::abs(inner) / (a.entries.row(n1).norm() * b.entries.row(n2).norm());
        }
    }
    expect /= 16.0;
    CHECK(pairwise_metric({MetricTag::kPawn, 0.5}, a, b) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("zero-norm channels are rejected")
{
    Substream rng = Substream::derived(39, {0});
    const ChannelMatrix a = random_channel(rng, 2, 8);
    ChannelMatrix zero = a;
    zero.entries.setZero();
    CHECK_THROWS_AS(pairwise_metric({MetricTag::kCorr, 0.5}, a, zero), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_metric({MetricTag::kPawn, 0.5}, a, zero), std::invalid_argument);
}

TEST_CASE("discordance matrix needs at least two devices")
{
    Substream rng = Substream::derived(40, {0});
    std::vector<ChannelMatrix> one;
    one.push_back(random_channel(rng, 2, 8));
    CHECK_THROWS_AS(discordance_matrix(one, {MetricTag::kCorr, 0.5}), std::invalid_argument);
}

TEST_CASE("two devices give a single mirrored off-diagonal entry")
{
    Substream rng = Substream::derived(41, {0});
    std::vector<ChannelMatrix> set;
    set.push_back(random_channel(rng, 2, 8));
    set.push_back(random_channel(rng, 2, 8));
    const DiscordanceMatrix theta = discordance_matrix(set, {MetricTag::kPawn, 0.5});
    CHECK(theta.values(0, 0) == 0.0);
    CHECK(theta.values(1, 1) == 0.0);
    CHECK(theta.values(0, 1) == pairwise_metric({MetricTag::kPawn, 0.5}, set[0], set[1]));
    CHECK(theta.values(0, 1) == theta.values(1, 0));
}

TEST_CASE("identical channels give all-ones CORR discordance")
{
    Substream rng = Substream::derived(42, {0});
    const ChannelMatrix h = random_channel(rng, 2, 8);
    std::vector<ChannelMatrix> set(5, h);
    const DiscordanceMatrix theta = discordance_matrix(set, {MetricTag::kCorr, 0.5});
    for (int j = 0; j < 5; ++j)
    {
        for (int l = 0; l < 5; ++l)
        {
            if (j != l)
            {
                CHECK(theta.values(j, l) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("KING matrix entries match an independent recomputation")
{
    Substream rng = Substream::derived(43, {0});
    std::vector<ChannelMatrix> set;
    for (int i = 0; i < 6; ++i)
    {
        set.push_back(random_channel(rng, 2, 8));
    }
    const DiscordanceMatrix theta = discordance_matrix(set, {MetricTag::kKing, 0.5});

    // Straightforward second pass with an explicitly computed population max.
    double e_max = 0.0;
    for (const ChannelMatrix &h : set)
    {
        e_max = std::max(e_max, h.entries.squaredNorm());
    }
    for (int j = 0; j < 6; ++j)
    {
        for (int l = 0; l < 6; ++l)
        {
            if (j == l)
            {
                CHECK(theta.values(j, l) == 0.0);
                continue;
            }
            const double expect =
                pairwise_metric({MetricTag::kKing, 0.5}, set[j], set[l], e_max);
            CHECK(theta.values(j, l) == expect);
        }
    }
}

TEST_CASE("CORR and PAWN stay within [0, 1] and KING within its range")
{
    Substream rng = Substream::derived(44, {0});
    std::vector<ChannelMatrix> set;
    for (int i = 0; i < 8; ++i)
    {
        set.push_back(random_channel(rng, 3, 8));
    }
    const double omega = 0.5;
    for (MetricTag tag : {MetricTag::kCorr, MetricTag::kPawn, MetricTag::kRook, MetricTag::kKing})
    {
        const DiscordanceMatrix theta = discordance_matrix(set, {tag, omega});
        const double upper = tag == MetricTag::kKing ? 2.0 * omega + (1.0 - omega) : 1.0;
        for (int j = 0; j < 8; ++j)
        {
            for (int l = j + 1; l < 8; ++l)
            {
                CHECK(theta.values(j, l) >= 0.0);
                CHECK(theta.values(j, l) <= upper + 1e-12);
            }
        }
    }
}

TEST_CASE("discordance CSV round-trips")
{
    Substream rng = Substream::derived(45, {0});
    std::vector<ChannelMatrix> set;
    for (int i = 0; i < 4; ++i)
    {
        set.push_back(random_channel(rng, 2, 8));
    }
    const DiscordanceMatrix theta = discordance_matrix(set, {MetricTag::kRook, 0.5});
    std::stringstream buffer;
    write_csv(buffer, theta);
    const DiscordanceMatrix loaded = read_csv(buffer);
    CHECK((theta.values - loaded.values).cwiseAbs().maxCoeff() < 1e-15);
}
