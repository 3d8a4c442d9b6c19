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

#ifndef AUXSEL_TESTS_ORACLES_HPP
#define AUXSEL_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "auxsel/dseparation.hpp"
#include "auxsel/graph.hpp"

namespace auxsel::testing {

struct CorpusOptions {
    std::size_t count = 500;
    std::size_t min_nodes = 2;
    std::size_t max_nodes = 6;
    double edge_probability = 0.45;
    double observed_probability = 0.4;
    std::uint64_t seed = 20260101;
};

/// Random DAGs: a strictly upper-triangular adjacency relabeled by a random
/// permutation, each node observed with the given probability. Every graph has
/// at least one observed and one unobserved node.
inline std::vector<Dag> random_corpus(const CorpusOptions& opt = {}) {
    std::mt19937_64 rng(opt.seed);
    const auto coin = [&rng](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
    std::vector<Dag> out;
    while (out.size() < opt.count) {
        const std::size_t n = opt.min_nodes + rng() % (opt.max_nodes - opt.min_nodes + 1);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (coin(opt.edge_probability)) edges.push_back({NodeId(perm[i]), NodeId(perm[j])});
            }
        }
        NodeSet observed;
        for (std::size_t v = 0; v < n; ++v) {
            if (coin(opt.observed_probability)) observed.insert(NodeId(v));
        }
        if (observed.empty() || observed.size() == n) continue;
        out.push_back(build_dag(n, edges, observed));
    }
    return out;
}

/// All subsets of `nodes`, including the empty one.
inline std::vector<NodeSet> all_subsets(const NodeSet& nodes) {
    const std::vector<NodeId> items(nodes.begin(), nodes.end());
    std::vector<NodeSet> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
        NodeSet s;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (mask >> i & 1U) s.insert(items[i]);
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Groups of unobserved nodes under the pairwise oracle relation, closed
/// transitively with union-find.
inline std::vector<std::vector<NodeId>> oracle_groups(const Dag& dag, const NodeSet& conditioning) {
    const NodeSet unobserved = dag.unobserved();
    const std::vector<NodeId> u(unobserved.begin(), unobserved.end());
    std::vector<std::size_t> root(u.size());
    std::iota(root.begin(), root.end(), 0);
    const std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return root[i] == i ? i : root[i] = find(root[i]);
    };
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            if (!d_separated_oracle(dag, {u[i]}, {u[j]}, conditioning)) root[find(j)] = find(i);
        }
    }
    std::vector<std::vector<NodeId>> groups;
    std::vector<std::size_t> slot(u.size(), u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const std::size_t r = find(i);
        if (slot[r] == u.size()) {
            slot[r] = groups.size();
            groups.emplace_back();
        }
        groups[slot[r]].push_back(u[i]);
    }
    return groups;
}

/// Best group count over every nonempty subset of the observed nodes.
inline std::size_t oracle_best_group_count(const Dag& dag) {
    std::size_t best = 0;
    for (const NodeSet& s : all_subsets(dag.observed())) {
        if (s.empty()) continue;
        best = std::max(best, oracle_groups(dag, s).size());
    }
    return best;
}

/// Lexicographically smallest topological order, found by scanning all n!
/// permutations.
inline std::vector<NodeId> brute_force_topological_order(const Dag& dag) {
    std::vector<std::size_t> perm(dag.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<std::size_t> pos(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = i;
        const bool valid = std::all_of(dag.edges().begin(), dag.edges().end(), [&](const Edge& e) {
            return pos[e.parent.index()] < pos[e.child.index()];
        });
        if (valid) {
            std::vector<NodeId> out;
            for (std::size_t v : perm) out.emplace_back(v);
            return out;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {};
}

/// Maximum of sum_i |m(i, sigma(i))| by trying every permutation.
inline std::vector<std::size_t> brute_force_assignment(const Eigen::MatrixXd& m, double* best_total = nullptr) {
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_sum = -1.0;
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])));
        }
        if (s > best_sum) {
            best_sum = s;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best_total) *best_total = best_sum;
    return best;
}

/// Central-difference Jacobian of f at z.
inline Eigen::MatrixXd numerical_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& z, double h = 1e-5) {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd j(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXd up = z, down = z;
        up(k) += h;
        down(k) -= h;
        j.col(k) = (f(up) - f(down)) / (2.0 * h);
    }
    return j;
}

inline double lu_determinant(const Eigen::MatrixXd& m) { return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant(); }

/// Covariance of a linear SCM by propagating in topological order:
/// Cov(x_i, x_j) = sum_{k in pa(i)} beta_ki Cov(x_k, x_j) for j earlier than i.
inline Eigen::MatrixXd propagated_covariance(const Dag& dag, const std::function<double(Edge)>& beta,
                                             const std::vector<double>& noise_var) {
    const std::vector<NodeId> order = brute_force_topological_order(dag);
    const auto n = static_cast<Eigen::Index>(dag.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < order.size(); ++a) {
        const NodeId i = order[a];
        const auto ii = static_cast<Eigen::Index>(i.index());
        for (std::size_t b = 0; b <= a; ++b) {
            const auto jj = static_cast<Eigen::Index>(order[b].index());
            double c = 0.0;
            for (NodeId p : dag.parents(i)) c += beta({p, i}) * cov(static_cast<Eigen::Index>(p.index()), jj);
            if (b == a) {
                // Var(x_i) = sum_p beta_p Cov(x_p, x_i) + noise variance; Cov(x_p, x_i) needs
                // the same parent sum, so expand once more.
                c = 0.0;
                for (NodeId p : dag.parents(i)) {
                    for (NodeId q : dag.parents(i)) {
                        c += beta({p, i}) * beta({q, i}) *
                             cov(static_cast<Eigen::Index>(p.index()), static_cast<Eigen::Index>(q.index()));
                    }
                }
                c += noise_var[i.index()];
            }
            cov(ii, jj) = c;
            cov(jj, ii) = c;
        }
    }
    return cov;
}

}  // namespace auxsel::testing

#endif  // AUXSEL_TESTS_ORACLES_HPP
