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

#include "auxsel/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "auxsel/error.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

inline constexpr double kConstantBlockTol = 1e-12;

std::size_t total(std::span<const std::size_t> sizes) {
    std::size_t n = 0;
    for (std::size_t s : sizes) n += s;
    return n;
}

double block_variation(const Eigen::MatrixXd& rows, Eigen::Index begin, Eigen::Index width) {
    if (rows.rows() == 0 || width == 0) return 0.0;
    const auto block = rows.middleCols(begin, width);
    return (block.colwise().maxCoeff() - block.colwise().minCoeff()).maxCoeff();
}

RankReport rank_of(const Eigen::MatrixXd& m, const WMatrix& w, std::size_t d, double tol, RankVariant variant) {
    RankReport r;
    r.variant = variant;
    r.group_count = d;
    r.required_rank = 2 * d;
    r.ambient_dimension = static_cast<std::size_t>(w.rows.cols());
    r.rows_used = static_cast<std::size_t>(m.rows());
    r.tolerance = tol;
    r.achieved_rank = numerical_rank(m, tol, &r.singular_values);
    r.satisfied = r.achieved_rank >= r.required_rank;

    const auto n_u = static_cast<Eigen::Index>(w.latent_dimension());
    r.v_block_variation = block_variation(w.rows, 0, n_u);
    r.vprime_block_variation = block_variation(w.rows, n_u, n_u);
    if (r.vprime_block_variation < kConstantBlockTol) {
        r.diagnostics.push_back(
            "second-derivative block is constant across conditioning values (fixed conditional variance); "
            "row differences span at most n_u = " + std::to_string(n_u) + " dimensions");
    }
    if (r.v_block_variation < kConstantBlockTol) {
        r.diagnostics.push_back("first-derivative block is constant across conditioning values");
    }
    if (r.required_rank > r.ambient_dimension) {
        r.diagnostics.push_back("required rank " + std::to_string(r.required_rank) + " exceeds row width " +
                                std::to_string(r.ambient_dimension));
    }
    if (r.required_rank < r.ambient_dimension) {
        r.diagnostics.push_back("groups are not all scalar: required rank " + std::to_string(r.required_rank) +
                                " is below row width " + std::to_string(r.ambient_dimension));
    }
    r.diagnostics.push_back("checked at a single evaluation point of the unobserved nodes");
    return r;
}

}  // namespace

std::size_t WMatrix::latent_dimension() const { return total(group_sizes); }

Eigen::VectorXd gaussian_w_row(std::span<const GaussianConditional> conditionals, const Eigen::VectorXd& point,
                               const Eigen::VectorXd& z_o) {
    std::size_t n_u = 0;
    for (const auto& c : conditionals) n_u += c.targets.size();
    if (static_cast<Eigen::Index>(n_u) != point.size()) {
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(point.size()) +
                                                      " entries, groups cover " + std::to_string(n_u));
    }
    const auto width = static_cast<Eigen::Index>(n_u);
    Eigen::VectorXd row(2 * width);
    Eigen::Index offset = 0;
    for (const auto& c : conditionals) {
        const auto k = static_cast<Eigen::Index>(c.targets.size());
        const Eigen::LLT<Eigen::MatrixXd> llt(c.covariance);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorCode::SingularCovariance, "group covariance is not positive definite");
        }
        const Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(k, k));
        const Eigen::VectorXd centered = point.segment(offset, k) - c.mean_at(z_o);
        row.segment(offset, k) = -(precision * centered);
        row.segment(width + offset, k) = -precision.diagonal();
        offset += k;
    }
    return row;
}

Eigen::VectorXd finite_difference_w_row(const GroupLogDensity& logp, const Eigen::VectorXd& point,
                                        const Eigen::VectorXd& z_o, double h) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
    const std::size_t n_u = total(logp.group_sizes);
    if (static_cast<Eigen::Index>(n_u) != point.size()) {
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(point.size()) +
                                                      " entries, groups cover " + std::to_string(n_u));
    }
    const auto width = static_cast<Eigen::Index>(n_u);
    Eigen::VectorXd row(2 * width);
    const auto eval = [&](std::size_t g, const Eigen::VectorXd& values) {
        const double f = logp.log_density(g, values, z_o);
        if (!std::isfinite(f)) throw Error(ErrorCode::NonFiniteDensity, "log-density is not finite");
        return f;
    };

    Eigen::Index offset = 0;
    for (std::size_t g = 0; g < logp.group_sizes.size(); ++g) {
        const auto k = static_cast<Eigen::Index>(logp.group_sizes[g]);
        const Eigen::VectorXd base = point.segment(offset, k);
        const double f0 = eval(g, base);
        for (Eigen::Index l = 0; l < k; ++l) {
            Eigen::VectorXd up = base;
            Eigen::VectorXd down = base;
            up(l) += h;
            down(l) -= h;
            const double fp = eval(g, up);
            const double fm = eval(g, down);
            row(offset + l) = (fp - fm) / (2.0 * h);
            row(width + offset + l) = (fp - 2.0 * f0 + fm) / (h * h);
        }
        offset += k;
    }
    return row;
}

std::string_view to_string(RankVariant variant) {
    return variant == RankVariant::Direct ? "direct" : "subtracted";
}

RankVariant parse_rank_variant(std::string_view text) {
    if (text == "direct") return RankVariant::Direct;
    if (text == "subtracted") return RankVariant::Subtracted;
    throw Error(ErrorCode::InvalidArgument, "unknown rank variant '" + std::string(text) + "'");
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol, std::vector<double>* singular_values) {
    if (m.rows() == 0 || m.cols() == 0) {
        if (singular_values) singular_values->clear();
        return 0;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& s = svd.singularValues();  // descending
    if (singular_values) singular_values->assign(s.data(), s.data() + s.size());
    const double largest = s(0);
    if (!(largest > 0.0)) return 0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * largest) ++rank;
    }
    return rank;
}

RankReport check_rank_direct(const WMatrix& w, std::size_t d, double tol) {
    const auto m = static_cast<std::size_t>(w.rows.rows());
    if (m < 2 * d) {
        throw Error(ErrorCode::TooFewSamples, "direct check needs at least " + std::to_string(2 * d) +
                                                  " rows, got " + std::to_string(m));
    }
    return rank_of(w.rows, w, d, tol, RankVariant::Direct);
}

RankReport check_rank_subtracted(const WMatrix& w, std::size_t d, double tol) {
    const auto m = static_cast<std::size_t>(w.rows.rows());
    if (m < 2 * d + 1) {
        throw Error(ErrorCode::TooFewSamples, "subtracted check needs at least " + std::to_string(2 * d + 1) +
                                                  " rows, got " + std::to_string(m));
    }
    const Eigen::MatrixXd diffs = w.rows.bottomRows(w.rows.rows() - 1).rowwise() - w.rows.row(0);
    return rank_of(diffs, w, d, tol, RankVariant::Subtracted);
}

std::vector<GaussianConditional> group_conditionals(const ScmSpec& spec, const LatentPartition& p) {
    std::vector<GaussianConditional> out;
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.conditioning.size()));
    for (const auto& g : p.groups) {
        out.push_back(conditional(spec, NodeSet(g.begin(), g.end()), p.conditioning, zeros));
    }
    return out;
}

namespace {

struct DrawnSamples {
    Eigen::VectorXd point;
    std::vector<Eigen::VectorXd> conditioning;
};

DrawnSamples draw_samples(const ScmSpec& spec, const LatentPartition& p, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw Error(ErrorCode::TooFewSamples, "need at least one conditioning sample");
    ScmSpec reseeded = spec;
    reseeded.seed = seed;
    const SampleMatrix draws = sample(reseeded, m + 1);

    DrawnSamples out;
    std::vector<Eigen::Index> latent_cols;
    for (const auto& g : p.groups) {
        for (NodeId v : g) latent_cols.push_back(static_cast<Eigen::Index>(v.index()));
    }
    std::vector<Eigen::Index> cond_cols;
    for (NodeId v : p.conditioning) cond_cols.push_back(static_cast<Eigen::Index>(v.index()));

    out.point = draws.data(0, latent_cols).transpose();
    for (std::size_t i = 1; i <= m; ++i) {
        out.conditioning.push_back(draws.data(static_cast<Eigen::Index>(i), cond_cols).transpose());
    }
    return out;
}

std::vector<std::size_t> sizes_of(const LatentPartition& p) {
    std::vector<std::size_t> sizes;
    for (const auto& g : p.groups) sizes.push_back(g.size());
    return sizes;
}

}  // namespace

WMatrix gaussian_w_matrix(const ScmSpec& spec, const LatentPartition& p, std::size_t m, std::uint64_t seed) {
    const auto conditionals = group_conditionals(spec, p);
    DrawnSamples drawn = draw_samples(spec, p, m, seed);
    WMatrix w;
    w.point = drawn.point;
    w.group_sizes = sizes_of(p);
    const auto width = static_cast<Eigen::Index>(2 * w.latent_dimension());
    w.rows.resize(static_cast<Eigen::Index>(m), width);
    for (std::size_t i = 0; i < m; ++i) {
        w.rows.row(static_cast<Eigen::Index>(i)) = gaussian_w_row(conditionals, w.point, drawn.conditioning[i]).transpose();
    }
    w.conditioning_samples = std::move(drawn.conditioning);
    return w;
}

WMatrix density_w_matrix(const ScmSpec& spec, const LatentPartition& p, std::size_t m, std::uint64_t seed,
                         double h) {
    if (!p.unconditioned_observed.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "the joint-density route needs every observed node in the conditioning set");
    }
    DrawnSamples drawn = draw_samples(spec, p, m, seed);

    WMatrix w;
    w.point = drawn.point;
    w.group_sizes = sizes_of(p);

    std::vector<std::size_t> offsets;
    std::size_t acc = 0;
    for (std::size_t s : w.group_sizes) {
        offsets.push_back(acc);
        acc += s;
    }
    const std::vector<NodeId> cond(p.conditioning.begin(), p.conditioning.end());
    const Eigen::VectorXd point = w.point;

    // With the conditioning set equal to the observed set, the joint density
    // differs from p(z_c_j | z_o) only by factors constant in z_c_j.
    GroupLogDensity logp;
    logp.group_sizes = w.group_sizes;
    logp.log_density = [&spec, &p, offsets, cond, point](std::size_t g, const Eigen::VectorXd& values,
                                                         const Eigen::VectorXd& z_o) {
        Eigen::VectorXd full(static_cast<Eigen::Index>(spec.dag.size()));
        std::size_t k = 0;
        for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
            for (std::size_t l = 0; l < p.groups[gi].size(); ++l, ++k) {
                const double v = gi == g ? values(static_cast<Eigen::Index>(l))
                                         : point(static_cast<Eigen::Index>(offsets[gi] + l));
                full(static_cast<Eigen::Index>(p.groups[gi][l].index())) = v;
            }
        }
        for (std::size_t i = 0; i < cond.size(); ++i) {
            full(static_cast<Eigen::Index>(cond[i].index())) = z_o(static_cast<Eigen::Index>(i));
        }
        return log_density(spec, full);
    };

    const auto width = static_cast<Eigen::Index>(2 * w.latent_dimension());
    w.rows.resize(static_cast<Eigen::Index>(m), width);
    for (std::size_t i = 0; i < m; ++i) {
        w.rows.row(static_cast<Eigen::Index>(i)) =
            finite_difference_w_row(logp, w.point, drawn.conditioning[i], h).transpose();
    }
    w.conditioning_samples = std::move(drawn.conditioning);
    return w;
}

std::string rank_report_to_json(const RankReport& r) {
    json doc;
    doc["variant"] = to_string(r.variant);
    doc["verdict"] = r.satisfied ? "satisfied" : "violated";
    doc["group_count"] = r.group_count;
    doc["required_rank"] = r.required_rank;
    doc["achieved_rank"] = r.achieved_rank;
    doc["ambient_dimension"] = r.ambient_dimension;
    doc["rows_used"] = r.rows_used;
    doc["tolerance"] = r.tolerance;
    doc["singular_values"] = r.singular_values;
    doc["v_block_variation"] = r.v_block_variation;
    doc["vprime_block_variation"] = r.vprime_block_variation;
    doc["diagnostics"] = r.diagnostics;
    return doc.dump(2) + "\n";
}

}  // namespace auxsel
