/*
 * Copyright 2026 The auxsel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AUXSEL_RANDOM_HPP
#define AUXSEL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace auxsel {

/// Stream domains. Each consumer draws from its own substream so that, e.g.,
/// adding a node never perturbs the draws of existing nodes.
enum class StreamDomain : std::uint32_t {
    Coefficient = 1,
    Noise = 2,
    Mixing = 3,
    RankSamples = 4,
};

/// Portable seeded stream: mt19937_64 keyed through std::seed_seq on
/// (seed, domain, keys...), with distribution transforms written out here
/// rather than taken from <random>, whose distributions are not specified
/// bit-for-bit across standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamDomain domain, std::initializer_list<std::uint32_t> keys = {});

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Box-Muller; one variate per two uniforms.
    double normal();
    /// Zero-mean Laplace with scale b (standard deviation b*sqrt(2)).
    double laplace(double b);

private:
    std::mt19937_64 m_engine;
};

}  // namespace auxsel

#endif  // AUXSEL_RANDOM_HPP
