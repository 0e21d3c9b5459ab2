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

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace beamwave
{

namespace detail
{
// SplitMix64 finalizer (Steele, Lea, Flood; constants by Stafford).
inline std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
} // namespace detail

/// Counter-based splittable random stream. A stream is identified by a key
/// derived from a master seed plus an arbitrary list of substream indices
/// (seed index, device index, purpose tag, ...). Output n of a stream is a
/// pure function of (key, n), so draws never depend on which worker thread
/// owns the stream or on how other streams are consumed.
class Substream
{
  public:
    explicit Substream(std::uint64_t key) : key_(key) {}

    /// Derives a substream key from a master seed and index parts.
    static std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> parts)
    {
        std::uint64_t k = detail::mix64(master + detail::kGoldenGamma);
        for (std::uint64_t p : parts)
        {
            k = detail::mix64(k ^ detail::mix64(p + detail::kGoldenGamma));
        }
        return k;
    }

    static Substream derived(std::uint64_t master, std::initializer_list<std::uint64_t> parts)
    {
        return Substream(derive_key(master, parts));
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64()
    {
        counter_ += detail::kGoldenGamma;
        return detail::mix64(key_ ^ detail::mix64(counter_));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double standard_normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_;
        }
        // uniform() is in [0,1); use 1-u to keep the log argument in (0,1].
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1): independent real and
    /// imaginary parts, each N(0, 1/2).
    std::complex<double> complex_normal()
    {
        const double re = standard_normal() * M_SQRT1_2;
        const double im = standard_normal() * M_SQRT1_2;
        return {re, im};
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace beamwave
