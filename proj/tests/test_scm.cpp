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
#include "auxsel/random.hpp"
#include "auxsel/scm.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

namespace auxsel {
namespace {

using testing::id;

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    return centred.transpose() * centred / static_cast<double>(x.rows() - 1);
}

ScmSpec chain_spec(double beta) {
    Dag dag = testing::chain(2);
    std::map<Edge, double> coef{{{id(0), id(1)}, beta}};
    return make_spec(std::move(dag), coef, {{NoiseFamily::Gaussian, 1.0}, {NoiseFamily::Gaussian, 1.0}}, 1);
}

TEST(RandomSpec, DeterministicAndInRange) {
    const Dag dag = testing::five_node();
    const ScmSpec a = random_spec(dag, 99);
    const ScmSpec b = random_spec(dag, 99);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.coefficients.size(), dag.edges().size());
    for (const auto& [edge, beta] : a.coefficients) {
        EXPECT_GE(beta, 0.5);
        EXPECT_LE(beta, 1.0);
    }
    EXPECT_NE(random_spec(dag, 100).coefficients, a.coefficients);
}

TEST(RandomSpec, EdgelessHasNoCoefficients) {
    EXPECT_TRUE(random_spec(build_dag(3, std::vector<Edge>{}, {}), 1).coefficients.empty());
}

TEST(MakeSpec, Validation) {
    const Dag dag = testing::chain(2);
    const std::vector<NoiseSpec> unit{{NoiseFamily::Gaussian, 1.0}, {NoiseFamily::Gaussian, 1.0}};
    EXPECT_THROW(make_spec(dag, {}, unit, 0), Error);
    EXPECT_THROW(make_spec(dag, {{{id(0), id(1)}, 0.5}}, {{NoiseFamily::Gaussian, 1.0}, {NoiseFamily::Gaussian, 0.0}}, 0),
                 Error);
    EXPECT_THROW(make_spec(dag, {{{id(0), id(1)}, 0.5}}, {{NoiseFamily::Gaussian, 1.0}}, 0), Error);
}

TEST(Sample, ChainCovariance) {
    const Eigen::MatrixXd cov = empirical_covariance(sample(chain_spec(0.5), 100000).data);
    Eigen::Matrix2d expected;
    expected << 1.0, 0.5, 0.5, 1.25;
    EXPECT_LT((cov - expected).cwiseAbs().maxCoeff(), 0.03);
}

TEST(Sample, EdgelessUnitVariance) {
    const ScmSpec spec = random_spec(build_dag(3, std::vector<Edge>{}, {}), 4);
    const Eigen::MatrixXd cov = empirical_covariance(sample(spec, 100000).data);
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(cov(i, i), 1.0, 0.03);
}

TEST(Sample, DeterministicAndLabelled) {
    const ScmSpec spec = random_spec(testing::four_node(), 12);
    const SampleMatrix a = sample(spec, 500);
    const SampleMatrix b = sample(spec, 500);
    EXPECT_EQ(a.data, b.data);
    EXPECT_EQ(a.labels, (std::vector<std::string>{"z1", "z2", "z3", "z4"}));
    EXPECT_THROW(sample(spec, 0), Error);
}

TEST(Sample, AddingANodeKeepsExistingColumns) {
    // Node noise comes from per-node substreams, so a root column is unchanged
    // when an unrelated node is appended.
    const ScmSpec small = random_spec(build_dag(2, std::vector<Edge>{}, {}), 8);
    const ScmSpec big = random_spec(build_dag(3, std::vector<Edge>{}, {}), 8);
    const SampleMatrix a = sample(small, 200);
    const SampleMatrix b = sample(big, 200);
    EXPECT_EQ(a.data.col(0), b.data.col(0));
    EXPECT_EQ(a.data.col(1), b.data.col(1));
}

TEST(Sample, ConvergesWithinScaledBound) {
    const ScmSpec spec = random_spec(testing::five_node(), 31);
    const Eigen::MatrixXd sigma = analytic_covariance(spec);
    for (std::size_t n : {10000U, 100000U}) {
        const Eigen::MatrixXd cov = empirical_covariance(sample(spec, n).data);
        const double bound = 5.0 * std::sqrt(1.0 / static_cast<double>(n)) * sigma.cwiseAbs().maxCoeff();
        EXPECT_LT((cov - sigma).cwiseAbs().maxCoeff(), bound) << "N = " << n;
    }
}

TEST(Sample, LaplaceNoiseHasUnitVarianceAndHeavyTails) {
    const ScmSpec spec = random_spec(build_dag(1, std::vector<Edge>{}, {}), 5, NoiseFamily::Laplace);
    const Eigen::VectorXd x = sample(spec, 200000).data.col(0);
    const double mean = x.mean();
    const Eigen::ArrayXd c = x.array() - mean;
    const double var = c.square().mean();
    const double kurt = c.pow(4).mean() / (var * var);
    EXPECT_NEAR(var, 1.0, 0.03);
    EXPECT_NEAR(kurt, 6.0, 0.5);
}

TEST(AnalyticCovariance, HandCases) {
    Eigen::Matrix2d expected;
    expected << 1.0, 0.5, 0.5, 1.25;
    EXPECT_LT((analytic_covariance(chain_spec(0.5)) - expected).cwiseAbs().maxCoeff(), 1e-15);

    const ScmSpec edgeless = random_spec(build_dag(3, std::vector<Edge>{}, {}), 1);
    EXPECT_EQ(analytic_covariance(edgeless), Eigen::MatrixXd::Identity(3, 3));

    const std::vector<Edge> edges{{id(0), id(1)}, {id(0), id(2)}};
    const ScmSpec fork = make_spec(build_dag(3, edges, {}), {{edges[0], 1.0}, {edges[1], 1.0}},
                                   std::vector<NoiseSpec>(3), 0);
    EXPECT_DOUBLE_EQ(analytic_covariance(fork)(1, 2), 1.0);
}

TEST(AnalyticCovariance, MatchesPropagationOracle) {
    for (const Dag& dag : testing::random_corpus({.count = 60, .max_nodes = 6, .seed = 61})) {
        const ScmSpec spec = random_spec(dag, 7);
        const Eigen::MatrixXd oracle = testing::propagated_covariance(
            dag, [&](Edge e) { return spec.coefficients.at(e); }, std::vector<double>(dag.size(), 1.0));
        ASSERT_LT((analytic_covariance(spec) - oracle).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(AnalyticCovariance, RefusesLaplace) {
    EXPECT_THROW(analytic_covariance(random_spec(testing::four_node(), 1, NoiseFamily::Laplace)), Error);
}

TEST(Conditional, ChainHandComputation) {
    const ScmSpec spec = chain_spec(0.5);
    Eigen::VectorXd c(1);
    c << 1.7;
    const GaussianConditional g = conditional(spec, {id(1)}, {id(0)}, c);
    EXPECT_NEAR(g.mean(0), 0.85, 1e-15);
    EXPECT_NEAR(g.covariance(0, 0), 1.0, 1e-15);
}

TEST(Conditional, EmptyGivenIsMarginal) {
    const ScmSpec spec = random_spec(testing::five_node(), 3);
    const GaussianConditional g = conditional(spec, {id(1), id(3)}, {}, Eigen::VectorXd());
    const Eigen::MatrixXd sigma = analytic_covariance(spec);
    EXPECT_DOUBLE_EQ(g.covariance(0, 0), sigma(1, 1));
    EXPECT_DOUBLE_EQ(g.covariance(1, 1), sigma(3, 3));
}

TEST(Conditional, ColliderInducesNegativeCovariance) {
    const std::vector<Edge> edges{{id(0), id(2)}, {id(1), id(2)}};
    const ScmSpec spec = make_spec(build_dag(3, edges, {}), {{edges[0], 1.0}, {edges[1], 1.0}},
                                   std::vector<NoiseSpec>(3), 0);
    const GaussianConditional g = conditional(spec, {id(0), id(1)}, {id(2)}, Eigen::VectorXd::Zero(1));
    EXPECT_LT(g.covariance(0, 1), 0.0);

    // Monte Carlo: residuals of z1 and z2 after regressing on z3.
    const Eigen::MatrixXd x = sample(spec, 100000).data;
    const Eigen::MatrixXd cov = empirical_covariance(x);
    const double partial = cov(0, 1) - cov(0, 2) * cov(1, 2) / cov(2, 2);
    EXPECT_NEAR(partial, g.covariance(0, 1), 0.02);
}

TEST(Conditional, CovarianceIndependentOfValues) {
    const ScmSpec spec = random_spec(testing::five_node(), 21);
    Eigen::VectorXd v1(1), v2(1), v3(1);
    v1 << -2.0;
    v2 << 0.0;
    v3 << 3.5;
    const NodeSet targets{id(0), id(1), id(2), id(3)};
    const Eigen::MatrixXd c1 = conditional(spec, targets, {id(4)}, v1).covariance;
    EXPECT_EQ(c1, conditional(spec, targets, {id(4)}, v2).covariance);
    EXPECT_EQ(c1, conditional(spec, targets, {id(4)}, v3).covariance);
}

TEST(Conditional, GroupsAreConditionallyUncorrelated) {
    for (const Dag& dag : testing::random_corpus({.count = 80, .seed = 67})) {
        const ScmSpec spec = random_spec(dag, 2);
        for (const NodeSet& c : testing::all_subsets(dag.observed())) {
            const LatentPartition p = partition(dag, c);
            NodeSet targets = dag.unobserved();
            const GaussianConditional g = conditional(spec, targets, c, Eigen::VectorXd::Zero(c.size()));
            std::vector<std::size_t> group_of(dag.size());
            for (std::size_t k = 0; k < p.groups.size(); ++k) {
                for (NodeId v : p.groups[k]) group_of[v.index()] = k;
            }
            const std::vector<NodeId> order(targets.begin(), targets.end());
            for (std::size_t a = 0; a < order.size(); ++a) {
                for (std::size_t b = 0; b < order.size(); ++b) {
                    if (group_of[order[a].index()] == group_of[order[b].index()]) continue;
                    ASSERT_LT(std::abs(g.covariance(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))), 1e-8);
                }
            }
        }
    }
}

TEST(Conditional, Errors) {
    const ScmSpec spec = chain_spec(0.5);
    EXPECT_THROW(conditional(spec, {id(0)}, {id(0)}, Eigen::VectorXd::Zero(1)), Error);
    EXPECT_THROW(conditional(spec, {id(1)}, {id(0)}, Eigen::VectorXd::Zero(2)), Error);
}

TEST(LogDensity, GaussianMatchesClosedForm) {
    const ScmSpec spec = chain_spec(0.5);
    Eigen::VectorXd z(2);
    z << 0.3, -1.1;
    const Eigen::Matrix2d sigma = analytic_covariance(spec);
    const double quad = z.dot(sigma.inverse() * z);
    const double expected = -0.5 * quad - std::log(2.0 * M_PI) - 0.5 * std::log(sigma.determinant());
    EXPECT_NEAR(log_density(spec, z), expected, 1e-12);
}

TEST(SpecJson, RoundTrip) {
    const Dag dag = testing::five_node();
    const ScmSpec spec = random_spec(dag, 77, NoiseFamily::Laplace);
    const ScmSpec back = parse_spec_json(dag, spec_to_json(spec));
    EXPECT_EQ(back.coefficients, spec.coefficients);
    EXPECT_EQ(back.noise, spec.noise);
    EXPECT_EQ(back.seed, spec.seed);
    EXPECT_EQ(sample(back, 50).data, sample(spec, 50).data);
}

TEST(RandomStream, ReproducibleAndSeparated) {
    RandomStream a(1, StreamDomain::Noise, {3});
    RandomStream b(1, StreamDomain::Noise, {3});
    RandomStream c(1, StreamDomain::Noise, {4});
    for (int i = 0; i < 10; ++i) {
        const double x = a.normal();
        EXPECT_EQ(x, b.normal());
        EXPECT_NE(x, c.normal());
    }
    RandomStream u(2, StreamDomain::Mixing);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform01();
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
    }
}

}  // namespace
}  // namespace auxsel
