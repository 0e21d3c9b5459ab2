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
//
// Test-only generator of random SOCPs with a known optimum. A primal-dual
// pair (x*, s*, z*) is constructed to satisfy the KKT conditions exactly
// (per-cone complementarity, dual feasibility by choosing the cost as
// c = -A^T z*), so the constructed objective value is the oracle.

#pragma once

#include <vector>

#include "beamwave/conic.hpp"
#include "beamwave/rng.hpp"

namespace beamwave::testsupport
{

struct SynthesizedSocp
{
    conic::ConicProgram program; ///< maximize form
    RVector x_star;
    double optimal_value = 0.0; ///< value of the maximize objective at x*
};

inline SynthesizedSocp synthesize_socp(Substream &rng)
{
    const int n = 4 + static_cast<int>(rng.below(6)); // 4..9 variables
    const int n_lp = n + 2 + static_cast<int>(rng.below(4));
    const int n_soc = 1 + static_cast<int>(rng.below(3));

    std::vector<int> soc_dims;
    int rows = n_lp;
    for (int i = 0; i < n_soc; ++i)
    {
        soc_dims.push_back(3 + static_cast<int>(rng.below(4))); // dims 3..6
        rows += soc_dims.back();
    }

    RMatrix a(rows, n);
    for (int r = 0; r < rows; ++r)
    {
        for (int c = 0; c < n; ++c)
        {
            a(r, c) = rng.standard_normal();
        }
    }
    RVector x_star(n);
    for (int i = 0; i < n; ++i)
    {
        x_star(i) = rng.standard_normal();
    }

    RVector s_star = RVector::Zero(rows);
    RVector z_star = RVector::Zero(rows);

    // LP rows: roughly half active (s = 0 < z), the rest inactive (z = 0 < s).
    for (int i = 0; i < n_lp; ++i)
    {
        if (rng.uniform() < 0.5)
        {
            z_star(i) = rng.uniform(0.1, 2.0);
        }
        else
        {
            s_star(i) = rng.uniform(0.1, 2.0);
        }
    }

    // SOC blocks: interior-s, interior-z, or jointly active on the boundary.
    int at = n_lp;
    for (int k = 0; k < n_soc; ++k)
    {
        const int d = soc_dims[static_cast<std::size_t>(k)];
        const double mode = k == 0 ? 0.9 : rng.uniform(); // force one active block
        RVector tail(d - 1);
        for (int i = 0; i < d - 1; ++i)
        {
            tail(i) = rng.standard_normal();
        }
        if (tail.norm() < 1e-3)
        {
            tail(0) += 1.0;
        }
        if (mode < 0.25)
        {
            s_star(at) = tail.norm() + rng.uniform(0.2, 1.0);
            s_star.segment(at + 1, d - 1) = tail;
        }
        else if (mode < 0.5)
        {
            z_star(at) = tail.norm() + rng.uniform(0.2, 1.0);
            z_star.segment(at + 1, d - 1) = tail;
        }
        else
        {
            // Boundary pair: z on the cone boundary, s its scaled reflection.
            const double theta = rng.uniform(0.3, 1.5);
            z_star(at) = tail.norm();
            z_star.segment(at + 1, d - 1) = tail;
            s_star(at) = theta * tail.norm();
            s_star.segment(at + 1, d - 1) = -theta * tail;
        }
        at += d;
    }

    const RVector b = a * x_star + s_star;
    const RVector c_min = -a.transpose() * z_star;

    conic::ConicProgram program(n);
    program.set_objective(-c_min); // maximize form
    for (int i = 0; i < n_lp; ++i)
    {
        program.add_linear(a.row(i).transpose(), b(i));
    }
    at = n_lp;
    for (int k = 0; k < n_soc; ++k)
    {
        const int d = soc_dims[static_cast<std::size_t>(k)];
        program.add_soc(-a.middleRows(at + 1, d - 1), b.segment(at + 1, d - 1),
                        -a.row(at).transpose(), b(at));
        at += d;
    }

    SynthesizedSocp out{std::move(program), x_star, -c_min.dot(x_star)};
    return out;
}

} // namespace beamwave::testsupport
