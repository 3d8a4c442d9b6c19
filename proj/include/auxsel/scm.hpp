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

#ifndef AUXSEL_SCM_HPP
#define AUXSEL_SCM_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "auxsel/graph.hpp"
#include "auxsel/sample_matrix.hpp"

namespace auxsel {

enum class NoiseFamily { Gaussian, Laplace };

std::string_view to_string(NoiseFamily family);
NoiseFamily parse_noise_family(std::string_view text);

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::Gaussian;
    /// Standard deviation of the noise term.
    double scale = 1.0;
    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Linear SCM: x_i = sum_j beta_ji x_j + e_i over the edges of `dag`.
struct ScmSpec {
    Dag dag;
    std::map<Edge, double> coefficients;
    /// Indexed by node id.
    std::vector<NoiseSpec> noise;
    std::uint64_t seed = 0;

    bool all_gaussian() const;
};

/// Throws InvalidArgument unless coefficient keys equal the edge set and every
/// scale is strictly positive.
ScmSpec make_spec(Dag dag, std::map<Edge, double> coefficients, std::vector<NoiseSpec> noise,
                  std::uint64_t seed);

/// beta ~ Uniform[0.5, 1.0] per edge, unit-scale noise of the given family.
ScmSpec random_spec(const Dag& dag, std::uint64_t seed, NoiseFamily family = NoiseFamily::Gaussian);

/// Ancestral sampling in topological order; node i draws its noise from its own
/// substream of the spec seed. Throws InvalidArgument when n == 0.
SampleMatrix sample(const ScmSpec& spec, std::size_t n);

/// Weighted adjacency B with B(child, parent) = beta.
Eigen::MatrixXd weight_matrix(const ScmSpec& spec);

/// (I - B)^{-1} diag(scale^2) (I - B)^{-T}. Throws NonGaussianNoise.
Eigen::MatrixXd analytic_covariance(const ScmSpec& spec);

/// Joint log-density at `point` (one value per node). Works for every noise
/// family because I - B is unit lower-triangular in topological order.
double log_density(const ScmSpec& spec, const Eigen::VectorXd& point);

/// Gaussian conditional of `targets` given `given`; the mean is the affine map
/// intercept + gain * z_given.
struct GaussianConditional {
    std::vector<NodeId> targets;
    std::vector<NodeId> given;
    Eigen::VectorXd intercept;
    Eigen::MatrixXd gain;
    Eigen::MatrixXd covariance;
    /// Mean evaluated at the values passed to conditional().
    Eigen::VectorXd mean;

    Eigen::VectorXd mean_at(const Eigen::VectorXd& given_values) const;
};

/// Schur complement of the analytic covariance. Throws NonGaussianNoise,
/// OverlappingSets, DimensionMismatch, or SingularConditioning when the
/// conditioning block has an eigenvalue at or below 1e-10.
GaussianConditional conditional(const ScmSpec& spec, const NodeSet& targets, const NodeSet& given,
                                const Eigen::VectorXd& values);

std::string spec_to_json(const ScmSpec& spec);
/// Labels in the JSON are resolved against `dag`.
ScmSpec parse_spec_json(const Dag& dag, std::string_view text);

}  // namespace auxsel

#endif  // AUXSEL_SCM_HPP
