// retrowpt — retrodirective wireless power transfer simulator for ambient backscatter receivers
// Copyright (C) 2026 the retrowpt authors
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
// -------------------------------------------------------------------------

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>

namespace retrowpt {

/// Deterministic random stream (xoshiro256++ core, splitmix64 seeding).
///
/// The <random> engines are portable but the standard *distributions* are
/// implementation-defined, which would break byte-identical reproducibility
/// across toolchains. Every draw here is therefore fully specified: a given
/// (master seed, trial index) pair produces the same bit stream everywhere.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) noexcept
    {
        // splitmix64 state expansion, the seeding recommended for xoshiro
        std::uint64_t x = seed;
        for (auto &word : state_)
        {
            x += 0x9E3779B97F4A7C15ULL;
            word = mix64(x);
        }
    }

    /// Seed for one Monte Carlo trial, a pure function of (master seed, trial
    /// index). Trials can therefore run in any order, on any worker, and still
    /// draw identical samples.
    static std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t trial) noexcept
    {
        return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (trial + 1));
    }

    static RandomStream for_trial(std::uint64_t master_seed, std::uint64_t trial) noexcept
    {
        return RandomStream(substream_seed(master_seed, trial));
    }

    std::uint64_t next_u64() noexcept
    {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() noexcept
    {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n); bitmask rejection.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        if (n <= 1)
            return 0;
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
        std::uint64_t v;
        do
        {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }

    /// Standard normal N(0, 1). Box-Muller; consumes exactly two uniforms.
    double normal() noexcept
    {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// Circularly symmetric complex Gaussian CN(0, 1): two independent real
    /// Gaussians of variance 1/2, from one Box-Muller pair.
    std::complex<double> complex_normal() noexcept
    {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

  private:
    static constexpr double two_pi = 6.283185307179586476925286766559;

    static std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    // splitmix64 finalizer
    static std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace retrowpt
