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

#include "auxsel/scm.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "auxsel/error.hpp"
#include "auxsel/random.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

inline constexpr double kSingularEigenvalue = 1e-10;

void require_gaussian(const ScmSpec& spec) {
    if (!spec.all_gaussian()) {
        throw Error(ErrorCode::NonGaussianNoise, "closed-form covariance needs Gaussian noise on every node");
    }
}

std::vector<Eigen::Index> indices_of(const NodeSet& s) {
    std::vector<Eigen::Index> out;
    out.reserve(s.size());
    for (NodeId v : s) out.push_back(static_cast<Eigen::Index>(v.index()));
    return out;
}

}  // namespace

std::string_view to_string(NoiseFamily family) {
    return family == NoiseFamily::Gaussian ? "gaussian" : "laplace";
}

NoiseFamily parse_noise_family(std::string_view text) {
    if (text == "gaussian") return NoiseFamily::Gaussian;
    if (text == "laplace") return NoiseFamily::Laplace;
    throw Error(ErrorCode::InvalidArgument, "unknown noise family '" + std::string(text) + "'");
}

bool ScmSpec::all_gaussian() const {
    for (const auto& n : noise) {
        if (n.family != NoiseFamily::Gaussian) return false;
    }
    return true;
}

ScmSpec make_spec(Dag dag, std::map<Edge, double> coefficients, std::vector<NoiseSpec> noise,
                  std::uint64_t seed) {
    if (coefficients.size() != dag.edges().size()) {
        throw Error(ErrorCode::InvalidArgument, "coefficient keys must equal the edge set");
    }
    for (const Edge& e : dag.edges()) {
        auto it = coefficients.find(e);
        if (it == coefficients.end()) {
            throw Error(ErrorCode::InvalidArgument, "missing coefficient for edge " + dag.label(e.parent) +
                                                        "->" + dag.label(e.child));
        }
        if (!std::isfinite(it->second)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
    if (noise.size() != dag.size()) {
        throw Error(ErrorCode::InvalidArgument, "need one noise entry per node");
    }
    for (const auto& n : noise) {
        if (!(n.scale > 0.0) || !std::isfinite(n.scale)) {
            throw Error(ErrorCode::InvalidArgument, "noise scales must be strictly positive");
        }
    }
    return ScmSpec{std::move(dag), std::move(coefficients), std::move(noise), seed};
}

ScmSpec random_spec(const Dag& dag, std::uint64_t seed, NoiseFamily family) {
    std::map<Edge, double> coefficients;
    for (const Edge& e : dag.edges()) {
        RandomStream rng(seed, StreamDomain::Coefficient, {e.parent.value, e.child.value});
        coefficients[e] = rng.uniform(0.5, 1.0);
    }
    std::vector<NoiseSpec> noise(dag.size(), NoiseSpec{family, 1.0});
    return make_spec(dag, std::move(coefficients), std::move(noise), seed);
}

SampleMatrix sample(const ScmSpec& spec, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
    const Dag& dag = spec.dag;
    const auto rows = static_cast<Eigen::Index>(n);
    SampleMatrix out;
    out.labels = dag.labels();
    out.data.setZero(rows, static_cast<Eigen::Index>(dag.size()));

    for (NodeId v : topological_order(dag)) {
        const auto col = static_cast<Eigen::Index>(v.index());
        RandomStream rng(spec.seed, StreamDomain::Noise, {v.value});
        const NoiseSpec& noise = spec.noise[v.index()];
        if (noise.family == NoiseFamily::Gaussian) {
            for (Eigen::Index i = 0; i < rows; ++i) out.data(i, col) = noise.scale * rng.normal();
        } else {
            const double b = noise.scale / std::numbers::sqrt2;
            for (Eigen::Index i = 0; i < rows; ++i) out.data(i, col) = rng.laplace(b);
        }
        for (NodeId p : dag.parents(v)) {
            const double beta = spec.coefficients.at(Edge{p, v});
            out.data.col(col) += beta * out.data.col(static_cast<Eigen::Index>(p.index()));
        }
    }
    return out;
}

Eigen::MatrixXd weight_matrix(const ScmSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.dag.size());
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [edge, beta] : spec.coefficients) {
        b(static_cast<Eigen::Index>(edge.child.index()), static_cast<Eigen::Index>(edge.parent.index())) = beta;
    }
    return b;
}

Eigen::MatrixXd analytic_covariance(const ScmSpec& spec) {
    require_gaussian(spec);
    const auto n = static_cast<Eigen::Index>(spec.dag.size());
    const Eigen::MatrixXd i_minus_b = Eigen::MatrixXd::Identity(n, n) - weight_matrix(spec);
    // I - B is a permuted unit-triangular matrix, so the solve is exact up to rounding.
    const Eigen::MatrixXd a = i_minus_b.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd variances(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = spec.noise[static_cast<std::size_t>(i)].scale;
        variances(i) = s * s;
    }
    Eigen::MatrixXd sigma = a * variances.asDiagonal() * a.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

double log_density(const ScmSpec& spec, const Eigen::VectorXd& point) {
    const Dag& dag = spec.dag;
    if (point.size() != static_cast<Eigen::Index>(dag.size())) {
        throw Error(ErrorCode::DimensionMismatch, "point needs one value per node");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        const NodeId v(i);
        double residual = point(static_cast<Eigen::Index>(i));
        for (NodeId p : dag.parents(v)) {
            residual -= spec.coefficients.at(Edge{p, v}) * point(static_cast<Eigen::Index>(p.index()));
        }
        const NoiseSpec& noise = spec.noise[i];
        if (noise.family == NoiseFamily::Gaussian) {
            const double r = residual / noise.scale;
            total += -0.5 * r * r - std::log(noise.scale) - 0.5 * std::log(2.0 * std::numbers::pi);
        } else {
            const double b = noise.scale / std::numbers::sqrt2;
            total += -std::abs(residual) / b - std::log(2.0 * b);
        }
    }
    return total;
}

Eigen::VectorXd GaussianConditional::mean_at(const Eigen::VectorXd& given_values) const {
    if (given_values.size() != gain.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(gain.cols()) +
                                                      " conditioning values, got " +
                                                      std::to_string(given_values.size()));
    }
    if (gain.cols() == 0) return intercept;
    return intercept + gain * given_values;
}

GaussianConditional conditional(const ScmSpec& spec, const NodeSet& targets, const NodeSet& given,
                                const Eigen::VectorXd& values) {
    require_gaussian(spec);
    if (targets.empty()) throw Error(ErrorCode::InvalidArgument, "conditional needs a nonempty target set");
    for (NodeId v : targets) {
        if (!spec.dag.contains(v)) throw Error(ErrorCode::InvalidId, "target node " + std::to_string(v.index()));
        if (given.contains(v)) throw Error(ErrorCode::OverlappingSets, "targets and given set intersect");
    }
    for (NodeId v : given) {
        if (!spec.dag.contains(v)) throw Error(ErrorCode::InvalidId, "given node " + std::to_string(v.index()));
    }
    if (values.size() != static_cast<Eigen::Index>(given.size())) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(given.size()) +
                                                      " conditioning values, got " +
                                                      std::to_string(values.size()));
    }

    const Eigen::MatrixXd sigma = analytic_covariance(spec);
    const auto g = indices_of(targets);
    const auto c = indices_of(given);
    const Eigen::MatrixXd s_gg = sigma(g, g);

    GaussianConditional out;
    out.targets.assign(targets.begin(), targets.end());
    out.given.assign(given.begin(), given.end());
    // Zero-mean model: the intercept vanishes.
    out.intercept = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));

    if (c.empty()) {
        out.gain = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), 0);
        out.covariance = s_gg;
    } else {
        const Eigen::MatrixXd s_cc = sigma(c, c);
        const Eigen::MatrixXd s_gc = sigma(g, c);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s_cc, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() <= kSingularEigenvalue) {
            throw Error(ErrorCode::SingularConditioning, "conditioning covariance is not invertible");
        }
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(s_cc);
        out.gain = ldlt.solve(s_gc.transpose()).transpose();
        out.covariance = s_gg - out.gain * s_gc.transpose();
    }
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.covariance, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw Error(ErrorCode::SingularCovariance, "conditional covariance is not positive definite");
    }
    out.mean = out.mean_at(values);
    return out;
}

std::string spec_to_json(const ScmSpec& spec) {
    const Dag& dag = spec.dag;
    json coefficients = json::array();
    for (const auto& [edge, beta] : spec.coefficients) {
        coefficients.push_back({{"parent", dag.label(edge.parent)}, {"child", dag.label(edge.child)}, {"beta", beta}});
    }
    json noise = json::array();
    for (std::size_t i = 0; i < dag.size(); ++i) {
        noise.push_back({{"node", dag.label(NodeId(i))},
                         {"family", to_string(spec.noise[i].family)},
                         {"scale", spec.noise[i].scale}});
    }
    return json{{"seed", spec.seed}, {"coefficients", coefficients}, {"noise", noise}}.dump(2) + "\n";
}

ScmSpec parse_spec_json(const Dag& dag, std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    try {
        std::map<Edge, double> coefficients;
        for (const auto& c : doc.at("coefficients")) {
            const Edge e{dag.at(c.at("parent").get<std::string>()), dag.at(c.at("child").get<std::string>())};
            if (!dag.has_edge(e.parent, e.child)) {
                throw Error(ErrorCode::InvalidArgument, "coefficient for a non-edge " + dag.label(e.parent) +
                                                            "->" + dag.label(e.child));
            }
            coefficients[e] = c.at("beta").get<double>();
        }
        std::vector<NoiseSpec> noise(dag.size());
        std::vector<bool> seen(dag.size(), false);
        for (const auto& n : doc.at("noise")) {
            const NodeId v = dag.at(n.at("node").get<std::string>());
            noise[v.index()] = NoiseSpec{parse_noise_family(n.at("family").get<std::string>()),
                                         n.at("scale").get<double>()};
            seen[v.index()] = true;
        }
        for (std::size_t i = 0; i < dag.size(); ++i) {
            if (!seen[i]) throw Error(ErrorCode::InvalidArgument, "no noise entry for " + dag.label(NodeId(i)));
        }
        return make_spec(dag, std::move(coefficients), std::move(noise), doc.at("seed").get<std::uint64_t>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

}  // namespace auxsel
