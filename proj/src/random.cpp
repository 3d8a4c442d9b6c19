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

#include "auxsel/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace auxsel {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, StreamDomain domain,
                            std::initializer_list<std::uint32_t> keys) {
    std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed & 0xffffffffu),
                                        static_cast<std::uint32_t>(seed >> 32),
                                        static_cast<std::uint32_t>(domain)};
    material.insert(material.end(), keys.begin(), keys.end());
    std::seed_seq seq(material.begin(), material.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, StreamDomain domain,
                           std::initializer_list<std::uint32_t> keys)
    : m_engine(make_engine(seed, domain, keys)) {}

double RandomStream::normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::laplace(double b) {
    double u = uniform01() - 0.5;
    while (u == -0.5) u = uniform01() - 0.5;
    const double mag = -b * std::log1p(-2.0 * std::abs(u));
    return u < 0 ? -mag : mag;
}

}  // namespace auxsel
