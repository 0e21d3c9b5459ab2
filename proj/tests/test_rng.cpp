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

#include <doctest.h>

#include "beamwave/rng.hpp"

using beamwave::Substream;

TEST_CASE("substreams with the same key replay identically")
{
    Substream a = Substream::derived(42, {1, 2, 3});
    Substream b = Substream::derived(42, {1, 2, 3});
    for (int i = 0; i < 100; ++i)
    {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("substream keys separate on any index part")
{
    Substream a = Substream::derived(42, {1, 2, 3});
    Substream b = Substream::derived(42, {1, 2, 4});
    Substream c = Substream::derived(43, {1, 2, 3});
    CHECK(a.key() != b.key());
    CHECK(a.key() != c.key());
}

TEST_CASE("uniform draws live in [0,1) and fill the interval")
{
    Substream s = Substream::derived(7, {0});
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("standard normal has the right first two moments")
{
    Substream s = Substream::derived(11, {0});
    double sum = 0.0, sq = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i)
    {
        const double x = s.standard_normal();
        sum += x;
        sq += x * x;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("complex normal has unit total variance")
{
    Substream s = Substream::derived(13, {0});
    double var = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i)
    {
        var += std::norm(s.complex_normal());
    }
    CHECK(var / n == doctest::Approx(1.0).epsilon(0.03));
}
