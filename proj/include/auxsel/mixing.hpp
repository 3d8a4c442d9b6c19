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

#ifndef AUXSEL_MIXING_HPP
#define AUXSEL_MIXING_HPP

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "auxsel/sample_matrix.hpp"

namespace auxsel {

enum class MixingKind { SpecialOrthogonal, AdditiveCouplingStack };

std::string_view to_string(MixingKind kind);
MixingKind parse_mixing_kind(std::string_view text);

/// One additive coupling step. With `condition_on_head`, the first `split`
/// coordinates pass through and shift the rest; otherwise the last
/// `dimension - split` coordinates shift the first `split`.
///
/// The shift for updated coordinate j is
///     sum_i c[j][i][0] u_i + c[j][i][1] u_i^2 + c[j][i][2] u_i^3,  u_i = tanh(a_i)
/// over the pass-through coordinates a_i. Squashing the input keeps the shift
/// bounded with a bounded derivative, so stacked layers stay bi-Lipschitz.
struct CouplingLayer {
    std::size_t split = 1;
    bool condition_on_head = true;
    /// [updated coordinate][pass-through coordinate] -> cubic coefficients.
    std::vector<std::vector<std::array<double, 3>>> coefficients;
};

struct MixingSpec {
    MixingKind kind = MixingKind::SpecialOrthogonal;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    /// Special-orthogonal only.
    Eigen::MatrixXd rotation;
    /// Coupling stack only; applied first to last.
    std::vector<CouplingLayer> layers;
};

/// Throws DimensionTooSmall (n < 2 for coupling, n < 1 otherwise) or
/// InvalidArgument (coupling with zero layers).
MixingSpec random_mixing(MixingKind kind, std::size_t n, std::uint64_t seed, std::size_t layers = 3);

/// Checks the structural invariants; orthogonality and det = +1 to 1e-12.
/// Throws InvalidArgument.
void validate_mixing(const MixingSpec& spec);

/// Row-wise x = g(z). Throws DimensionMismatch.
SampleMatrix forward(const MixingSpec& spec, const SampleMatrix& z);
/// Row-wise z = g^{-1}(x), layers undone in reverse order. Throws DimensionMismatch.
SampleMatrix inverse(const MixingSpec& spec, const SampleMatrix& x);

Eigen::VectorXd forward_point(const MixingSpec& spec, const Eigen::VectorXd& z);
Eigen::VectorXd inverse_point(const MixingSpec& spec, const Eigen::VectorXd& x);

/// Self-contained: every coefficient is inline, doubles round-trip exactly.
std::string mixing_to_json(const MixingSpec& spec);
MixingSpec parse_mixing_json(std::string_view text);

}  // namespace auxsel

#endif  // AUXSEL_MIXING_HPP
