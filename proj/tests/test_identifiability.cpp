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

#include <gtest/gtest.h>

#include <cmath>

#include "auxsel/dseparation.hpp"
#include "auxsel/error.hpp"
#include "auxsel/identifiability.hpp"
#include "auxsel/random.hpp"
#include "auxsel/scm.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

namespace auxsel {
namespace {

using testing::id;

/// One scalar conditional with mean = intercept + gain * z_o and the given variance.
GaussianConditional scalar_conditional(double intercept, double gain, double variance) {
    GaussianConditional c;
    c.targets = {id(0)};
    c.given = {id(1)};
    c.intercept = Eigen::VectorXd::Constant(1, intercept);
    c.gain = Eigen::MatrixXd::Constant(1, 1, gain);
    c.covariance = Eigen::MatrixXd::Constant(1, 1, variance);
    c.mean = c.intercept;
    return c;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// Gaussian log-density of a group, written out directly from mean and covariance.
GroupLogDensity closed_form_density(const std::vector<GaussianConditional>& cs) {
    GroupLogDensity logp;
    for (const auto& c : cs) logp.group_sizes.push_back(c.targets.size());
    logp.log_density = [cs](std::size_t g, const Eigen::VectorXd& values, const Eigen::VectorXd& z_o) {
        const GaussianConditional& c = cs[g];
        const Eigen::VectorXd r = values - c.mean_at(z_o);
        return -0.5 * r.dot(c.covariance.inverse() * r);
    };
    return logp;
}

/// Scalar latent with mean z_o and variance exp(z_o).
GroupLogDensity variance_modulated() {
    GroupLogDensity logp;
    logp.group_sizes = {1};
    logp.log_density = [](std::size_t, const Eigen::VectorXd& z, const Eigen::VectorXd& z_o) {
        const double var = std::exp(z_o(0));
        const double r = z(0) - z_o(0);
        return -0.5 * r * r / var - 0.5 * std::log(2.0 * M_PI * var);
    };
    return logp;
}

WMatrix stack(const GroupLogDensity& logp, const Eigen::VectorXd& point, const std::vector<double>& z_o) {
    WMatrix w;
    w.point = point;
    w.group_sizes = logp.group_sizes;
    w.rows.resize(static_cast<Eigen::Index>(z_o.size()), 2 * point.size());
    for (std::size_t i = 0; i < z_o.size(); ++i) {
        const Eigen::VectorXd zo = vec({z_o[i]});
        w.rows.row(static_cast<Eigen::Index>(i)) = finite_difference_w_row(logp, point, zo, 1e-4).transpose();
        w.conditioning_samples.push_back(zo);
    }
    return w;
}

TEST(GaussianWRow, ScalarHandValues) {
    const std::vector<GaussianConditional> cs{scalar_conditional(0.5, 0.0, 1.0)};
    const Eigen::VectorXd row = gaussian_w_row(cs, vec({0.0}), vec({0.0}));
    EXPECT_DOUBLE_EQ(row(0), 0.5);
    EXPECT_DOUBLE_EQ(row(1), -1.0);
}

TEST(GaussianWRow, ZeroAtTheMode) {
    const std::vector<GaussianConditional> cs{scalar_conditional(0.0, 2.0, 4.0)};
    const Eigen::VectorXd row = gaussian_w_row(cs, vec({3.0}), vec({1.5}));
    EXPECT_DOUBLE_EQ(row(0), 0.0);
    EXPECT_DOUBLE_EQ(row(1), -0.25);
}

TEST(GaussianWRow, AgreesWithFiniteDifferences) {
    for (const Dag& dag : {testing::five_node(), testing::four_node(), testing::fork()}) {
        const ScmSpec spec = random_spec(dag, 13);
        const LatentPartition p = partition(dag, dag.observed());
        const auto cs = group_conditionals(spec, p);
        const GroupLogDensity logp = closed_form_density(cs);
        RandomStream rng(3, StreamDomain::RankSamples, {static_cast<std::uint32_t>(dag.size())});
        for (int k = 0; k < 50; ++k) {
            Eigen::VectorXd point(static_cast<Eigen::Index>(dag.unobserved().size()));
            for (Eigen::Index i = 0; i < point.size(); ++i) point(i) = rng.normal();
            Eigen::VectorXd z_o(static_cast<Eigen::Index>(p.conditioning.size()));
            for (Eigen::Index i = 0; i < z_o.size(); ++i) z_o(i) = rng.normal();
            const Eigen::VectorXd exact = gaussian_w_row(cs, point, z_o);
            const Eigen::VectorXd fd = finite_difference_w_row(logp, point, z_o, 1e-4);
            ASSERT_LT((exact - fd).cwiseAbs().maxCoeff(), 1e-5);
        }
    }
}

TEST(FiniteDifferenceWRow, LaplaceAwayFromKink) {
    GroupLogDensity logp;
    logp.group_sizes = {1};
    logp.log_density = [](std::size_t, const Eigen::VectorXd& z, const Eigen::VectorXd&) { return -std::abs(z(0)); };
    const Eigen::VectorXd row = finite_difference_w_row(logp, vec({1.0}), Eigen::VectorXd(), 1e-4);
    EXPECT_NEAR(row(0), -1.0, 1e-9);
    EXPECT_NEAR(row(1), 0.0, 1e-6);
}

TEST(FiniteDifferenceWRow, SymmetricCentre) {
    GroupLogDensity logp;
    logp.group_sizes = {1};
    logp.log_density = [](std::size_t, const Eigen::VectorXd& z, const Eigen::VectorXd&) { return -z(0) * z(0) * z(0) * z(0); };
    EXPECT_EQ(finite_difference_w_row(logp, vec({0.0}), Eigen::VectorXd(), 1e-3)(0), 0.0);
}

TEST(FiniteDifferenceWRow, Errors) {
    const GroupLogDensity logp = variance_modulated();
    EXPECT_THROW(finite_difference_w_row(logp, vec({0.0}), vec({0.0}), 0.0), Error);
    EXPECT_THROW(finite_difference_w_row(logp, vec({0.0, 1.0}), vec({0.0}), 1e-4), Error);
    GroupLogDensity bad;
    bad.group_sizes = {1};
    bad.log_density = [](std::size_t, const Eigen::VectorXd&, const Eigen::VectorXd&) { return -INFINITY; };
    EXPECT_THROW(finite_difference_w_row(bad, vec({0.0}), vec({0.0}), 1e-4), Error);
}

TEST(NumericalRank, RandomRowsAreFullRank) {
    RandomStream rng(77, StreamDomain::RankSamples);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd m(6, 6);
        for (Eigen::Index i = 0; i < 36; ++i) m(i) = rng.normal();
        ASSERT_EQ(numerical_rank(m, 1e-10), 6U);
    }
}

TEST(NumericalRank, DuplicateRows) {
    Eigen::MatrixXd m(3, 3);
    m << 1, 2, 3, 1, 2, 3, 0, 1, 5;
    EXPECT_EQ(numerical_rank(m, 1e-8), 2U);
}

TEST(NumericalRank, InvariantUnderRowPermutationAndScaling) {
    RandomStream rng(78, StreamDomain::RankSamples);
    Eigen::MatrixXd m(5, 6);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.normal();
    m.row(4) = m.row(0) + m.row(1);
    const std::size_t base = numerical_rank(m, 1e-8);
    Eigen::MatrixXd shuffled = m;
    shuffled.row(0).swap(shuffled.row(3));
    shuffled.row(2) *= -7.5;
    EXPECT_EQ(base, 4U);
    EXPECT_EQ(numerical_rank(shuffled, 1e-8), base);
}

TEST(CheckRank, FixedVarianceGaussianIsDegenerate) {
    // Three-node fork with an observed root: two scalar groups.
    const std::vector<Edge> edges{{id(0), id(1)}, {id(0), id(2)}};
    const Dag dag = build_dag(3, edges, {id(0)});
    const ScmSpec spec = random_spec(dag, 5);
    const LatentPartition p = partition(dag, {id(0)});
    ASSERT_EQ(p.groups.size(), 2U);
    const WMatrix w = gaussian_w_matrix(spec, p, 8, 9);
    const RankReport sub = check_rank_subtracted(w, 2);
    EXPECT_LT(sub.vprime_block_variation, 1e-12);
    EXPECT_LE(sub.achieved_rank, 2U);
    EXPECT_FALSE(sub.satisfied);
    EXPECT_FALSE(sub.diagnostics.empty());
}

TEST(CheckRank, UnmodulatedConditionalHasRankZero) {
    // Groups independent of z_o: every row is identical.
    const Dag dag = build_dag(3, std::vector<Edge>{}, {id(0)});
    const ScmSpec spec = random_spec(dag, 5);
    const WMatrix w = gaussian_w_matrix(spec, partition(dag, {id(0)}), 6, 1);
    EXPECT_EQ(check_rank_subtracted(w, 2).achieved_rank, 0U);
}

TEST(CheckRank, VarianceModulatedIsSatisfied) {
    const WMatrix w = stack(variance_modulated(), vec({0.0}), {0.0, 1.0, 2.0});
    const RankReport r = check_rank_subtracted(w, 1);
    EXPECT_EQ(r.achieved_rank, 2U);
    EXPECT_TRUE(r.satisfied);
    // Difference rows are (e^-1, 1 - e^-1) and (2e^-2, 1 - e^-2); their determinant:
    const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
    const double det = e1 * (1.0 - e2) - 2.0 * e2 * (1.0 - e1);
    const Eigen::MatrixXd diffs = w.rows.bottomRows(2).rowwise() - w.rows.row(0);
    EXPECT_NEAR(diffs.determinant(), det, 1e-6);
}

TEST(CheckRank, MonotoneInRows) {
    const ScmSpec spec = random_spec(testing::five_node(), 3, NoiseFamily::Laplace);
    const LatentPartition p = partition(spec.dag, {id(4)});
    std::size_t previous = 0;
    for (std::size_t m = 7; m <= 14; ++m) {
        // Same seed: the first rows coincide, later rows are appended.
        const WMatrix w = density_w_matrix(spec, p, m, 4);
        const std::size_t rank = check_rank_direct(w, 3).achieved_rank;
        EXPECT_GE(rank, previous);
        previous = rank;
    }
}

TEST(CheckRank, TooFewRows) {
    const WMatrix w = stack(variance_modulated(), vec({0.0}), {0.0, 1.0});
    EXPECT_THROW(check_rank_subtracted(w, 1), Error);
    EXPECT_NO_THROW(check_rank_direct(w, 1));
    const WMatrix one = stack(variance_modulated(), vec({0.0}), {0.0});
    EXPECT_THROW(check_rank_direct(one, 1), Error);
}

TEST(DensityWMatrix, MatchesGaussianRouteOnGaussianSpecs) {
    const ScmSpec spec = random_spec(testing::five_node(), 19);
    const LatentPartition p = partition(spec.dag, {id(4)});
    const WMatrix a = gaussian_w_matrix(spec, p, 12, 8);
    const WMatrix b = density_w_matrix(spec, p, 12, 8);
    EXPECT_EQ(a.point, b.point);
    EXPECT_LT((a.rows - b.rows).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(DensityWMatrix, NeedsEveryObservedNodeConditioned) {
    const Dag dag = testing::four_node();
    const ScmSpec spec = random_spec(dag, 1, NoiseFamily::Laplace);
    EXPECT_THROW(density_w_matrix(spec, partition(dag, {id(3)}), 4, 1), Error);
}

TEST(RankReportJson, KeysAndVerdict) {
    const WMatrix w = stack(variance_modulated(), vec({0.0}), {0.0, 1.0, 2.0});
    const std::string text = rank_report_to_json(check_rank_subtracted(w, 1));
    EXPECT_NE(text.find("\"verdict\": \"satisfied\""), std::string::npos);
    EXPECT_NE(text.find("\"singular_values\""), std::string::npos);
}

}  // namespace
}  // namespace auxsel
