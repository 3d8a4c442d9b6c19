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

#ifndef AUXSEL_IDENTIFIABILITY_HPP
#define AUXSEL_IDENTIFIABILITY_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "auxsel/dseparation.hpp"
#include "auxsel/scm.hpp"

namespace auxsel {

inline constexpr double kDefaultRankTolerance = 1e-8;

/// Stacked derivative rows. Row i is (v block, v' block) evaluated at `point`
/// for the i-th conditioning sample: the first n_u entries hold first
/// derivatives of each group's conditional log-density, the next n_u the
/// matching second derivatives, both in group order.
struct WMatrix {
    Eigen::MatrixXd rows;
    std::vector<Eigen::VectorXd> conditioning_samples;
    /// Values of the unobserved nodes, groups concatenated in order.
    Eigen::VectorXd point;
    std::vector<std::size_t> group_sizes;

    std::size_t latent_dimension() const;
};

/// Log-density of group `group` at `values` given conditioning values `z_o`.
/// Only derivatives in `values` are taken, so additive constants may be dropped.
struct GroupLogDensity {
    std::vector<std::size_t> group_sizes;
    std::function<double(std::size_t group, const Eigen::VectorXd& values, const Eigen::VectorXd& z_o)> log_density;
};

/// Closed-form Gaussian derivatives: v = -S^{-1}(z - mu(z_o)), v' = -diag(S^{-1}).
/// Throws DimensionMismatch or SingularCovariance.
Eigen::VectorXd gaussian_w_row(std::span<const GaussianConditional> conditionals, const Eigen::VectorXd& point,
                               const Eigen::VectorXd& z_o);

/// Central differences with step h for both derivative orders.
/// Throws InvalidArgument (h <= 0), DimensionMismatch, NonFiniteDensity.
Eigen::VectorXd finite_difference_w_row(const GroupLogDensity& logp, const Eigen::VectorXd& point,
                                        const Eigen::VectorXd& z_o, double h);

enum class RankVariant { Direct, Subtracted };

std::string_view to_string(RankVariant variant);
RankVariant parse_rank_variant(std::string_view text);

struct RankReport {
    RankVariant variant = RankVariant::Direct;
    std::size_t group_count = 0;
    /// 2 * group_count.
    std::size_t required_rank = 0;
    std::size_t achieved_rank = 0;
    /// Row width, 2 * n_u.
    std::size_t ambient_dimension = 0;
    /// Rows that entered the SVD (M, or M - 1 for the subtracted variant).
    std::size_t rows_used = 0;
    std::vector<double> singular_values;
    double tolerance = kDefaultRankTolerance;
    bool satisfied = false;
    /// Largest spread (max - min across rows) of any column in each block.
    double v_block_variation = 0.0;
    double vprime_block_variation = 0.0;
    std::vector<std::string> diagnostics;
};

/// Rank of the rows themselves. Throws TooFewSamples when M < 2d.
RankReport check_rank_direct(const WMatrix& w, std::size_t d, double tol = kDefaultRankTolerance);

/// Rank of rows 1..M-1 minus row 0. Throws TooFewSamples when M < 2d + 1.
RankReport check_rank_subtracted(const WMatrix& w, std::size_t d, double tol = kDefaultRankTolerance);

/// Singular values above tol * largest.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol, std::vector<double>* singular_values = nullptr);

/// One conditional per group of `p`, each given p.conditioning.
std::vector<GaussianConditional> group_conditionals(const ScmSpec& spec, const LatentPartition& p);

/// Draws M + 1 joint samples from the SCM under `seed`: the first supplies the
/// evaluation point, the remaining M the conditioning values.
WMatrix gaussian_w_matrix(const ScmSpec& spec, const LatentPartition& p, std::size_t m, std::uint64_t seed);

/// Finite-difference route for any noise family, through the joint density.
/// Needs every observed node conditioned (InvalidArgument otherwise), since
/// unconditioned observed nodes would have to be integrated out.
WMatrix density_w_matrix(const ScmSpec& spec, const LatentPartition& p, std::size_t m, std::uint64_t seed,
                         double h = 1e-4);

std::string rank_report_to_json(const RankReport& report);

}  // namespace auxsel

#endif  // AUXSEL_IDENTIFIABILITY_HPP
