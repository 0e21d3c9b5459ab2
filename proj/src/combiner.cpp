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

#include "beamwave/combiner.hpp"

#include <stdexcept>

namespace beamwave::combiner
{

CVector principal_eigvec(const channel::ChannelMatrix &h)
{
    if (h.entries.size() == 0 || h.entries.norm() == 0.0)
    {
        throw std::invalid_argument("principal_eigvec: zero channel matrix");
    }
    const CMatrix gram = h.entries * h.entries.adjoint();
    const int n = static_cast<int>(gram.rows());

    // Deterministic start with mildly uneven entries so symmetric ties do not
    // leave the iteration stuck on an invariant subspace.
    CVector v(n);
    for (int i = 0; i < n; ++i)
    {
        v(i) = Complex(1.0 + 1e-3 * static_cast<double>(i), 0.0);
    }
    v.normalize();

    constexpr double kTol = 1e-10;
    constexpr int kMaxIters = 10000;
    for (int iter = 0; iter < kMaxIters; ++iter)
    {
        CVector mv = gram * v;
        const double lambda = mv.norm();
        if (lambda == 0.0)
        {
            break; // v landed in the null space; gram is PSD so keep v
        }
        mv /= lambda;
        const double residual = (gram * mv - lambda * mv).norm();
        v = mv;
        if (residual <= kTol * lambda)
        {
            break;
        }
    }

    // Fix the global phase: rotate the largest-magnitude element (first on
    // ties) to be real positive.
    int i_max = 0;
    double best = std::abs(v(0));
    for (int i = 1; i < n; ++i)
    {
        const double mag = std::abs(v(i));
        if (mag > best)
        {
            best = mag;
            i_max = i;
        }
    }
    v *= std::conj(v(i_max)) / best;
    v.normalize();
    return v;
}

Combiner design_combiner(const channel::ChannelMatrix &h, const PhaseCodebook &codebook)
{
    if (codebook.l_rx < 2)
    {
        throw std::invalid_argument("design_combiner: codebook needs at least two phases");
    }
    const CVector r_max = principal_eigvec(h);
    const int n_rx = static_cast<int>(r_max.size());
    Combiner result;
    result.w.resize(n_rx);
    for (int l = 0; l < n_rx; ++l)
    {
        int best_index = 0;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < codebook.l_rx; ++i)
        {
            const double value = std::real(std::conj(codebook.element(i)) * r_max(l));
            if (value > best_value)
            {
                best_value = value;
                best_index = i;
            }
        }
        result.w(l) = codebook.element(best_index);
    }
    return result;
}

} // namespace beamwave::combiner
