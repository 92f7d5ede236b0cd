// mimo-rfsel  RF-chain activation and antenna selection for downlink massive MIMO
// Copyright (C) 2026 mimo-rfsel contributors
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

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>

namespace rfsel
{

/// Deterministic random stream used for all Monte-Carlo draws.
///
/// The generator is std::mt19937_64 (bit-exact across platforms by the C++
/// standard). Uniform doubles are built from the top 53 bits of a raw draw
/// and normals via the Box-Muller transform, so every draw sequence is
/// reproducible independently of the standard library's distribution
/// implementations. The mapping from raw bits to values is frozen within a
/// major release.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_open()
    {
        return 1.0 - uniform();
    }

    /// Unbiased uniform integer in [0, n); rejection sampling on raw draws.
    std::uint64_t bounded(std::uint64_t n);

    /// One Box-Muller pair of independent standard normals.
    std::pair<double, double> normal_pair()
    {
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    /// Circularly-symmetric complex Gaussian, zero mean, unit variance
    /// (real and imaginary parts each have variance 1/2). Consumes exactly
    /// one Box-Muller pair.
    std::complex<double> complex_gaussian()
    {
        const auto [a, b] = normal_pair();
        return {a * 0.7071067811865475244, b * 0.7071067811865475244};
    }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; the mixing primitive behind substreams.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives the seed of an order-independent substream from a master seed
/// and a path of indices, e.g. substream_seed(master, {point, trial}).
/// Trials seeded this way can run in any order or in parallel and still
/// reproduce bit-identical draws.
std::uint64_t substream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Convenience: an Rng positioned at the given substream.
inline Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return Rng(substream_seed(master, path));
}

} // namespace rfsel
