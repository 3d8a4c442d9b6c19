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

#include "auxsel/mixing.hpp"

#include <cmath>
#include <json.hpp>

#include "auxsel/error.hpp"
#include "auxsel/random.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

inline constexpr double kOrthogonalityTol = 1e-12;

Eigen::MatrixXd random_rotation(std::size_t n, std::uint64_t seed) {
    const auto dim = static_cast<Eigen::Index>(n);
    RandomStream rng(seed, StreamDomain::Mixing, {0});
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Sign fix makes the draw Haar on O(n); the final flip lands it in SO(n).
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

CouplingLayer random_layer(std::size_t n, std::uint64_t seed, std::size_t index) {
    RandomStream rng(seed, StreamDomain::Mixing, {1, static_cast<std::uint32_t>(index)});
    CouplingLayer layer;
    layer.split = 1 + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n - 1));
    layer.condition_on_head = index % 2 == 0;
    const std::size_t pass = layer.condition_on_head ? layer.split : n - layer.split;
    const std::size_t updated = n - pass;
    layer.coefficients.assign(updated, std::vector<std::array<double, 3>>(pass));
    for (auto& row : layer.coefficients) {
        for (auto& c : row) {
            for (double& v : c) {
                const double magnitude = rng.uniform(0.5, 1.5);
                v = rng.uniform01() < 0.5 ? -magnitude : magnitude;
            }
        }
    }
    return layer;
}

struct LayerView {
    Eigen::Index pass_begin;
    Eigen::Index pass_size;
    Eigen::Index upd_begin;
    Eigen::Index upd_size;
};

LayerView view_of(const CouplingLayer& layer, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n);
    const auto split = static_cast<Eigen::Index>(layer.split);
    if (layer.condition_on_head) return {0, split, split, dim - split};
    return {split, dim - split, 0, split};
}

/// Shift applied to the updated block, as a function of the pass-through block.
Eigen::VectorXd shift(const CouplingLayer& layer, const Eigen::VectorXd& pass) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layer.coefficients.size()));
    for (std::size_t j = 0; j < layer.coefficients.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < layer.coefficients[j].size(); ++i) {
            const double u = std::tanh(pass(static_cast<Eigen::Index>(i)));
            const auto& c = layer.coefficients[j][i];
            acc += u * (c[0] + u * (c[1] + u * c[2]));
        }
        out(static_cast<Eigen::Index>(j)) = acc;
    }
    return out;
}

void require_dimension(const MixingSpec& spec, Eigen::Index cols) {
    if (cols != static_cast<Eigen::Index>(spec.dimension)) {
        throw Error(ErrorCode::DimensionMismatch, "mixing has dimension " + std::to_string(spec.dimension) +
                                                      ", input has " + std::to_string(cols) + " columns");
    }
}

SampleMatrix apply_rows(const MixingSpec& spec, const SampleMatrix& in, bool forward_dir,
                        const std::string& prefix) {
    require_dimension(spec, in.cols());
    SampleMatrix out;
    out.data.resize(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < in.rows(); ++i) {
        const Eigen::VectorXd row = in.data.row(i).transpose();
        out.data.row(i) = (forward_dir ? forward_point(spec, row) : inverse_point(spec, row)).transpose();
    }
    for (std::size_t j = 0; j < spec.dimension; ++j) out.labels.push_back(prefix + std::to_string(j + 1));
    return out;
}

}  // namespace

std::string_view to_string(MixingKind kind) {
    return kind == MixingKind::SpecialOrthogonal ? "special-orthogonal" : "additive-coupling-stack";
}

MixingKind parse_mixing_kind(std::string_view text) {
    if (text == "special-orthogonal") return MixingKind::SpecialOrthogonal;
    if (text == "additive-coupling-stack") return MixingKind::AdditiveCouplingStack;
    throw Error(ErrorCode::InvalidArgument, "unknown mixing kind '" + std::string(text) + "'");
}

MixingSpec random_mixing(MixingKind kind, std::size_t n, std::uint64_t seed, std::size_t layers) {
    MixingSpec spec;
    spec.kind = kind;
    spec.dimension = n;
    spec.seed = seed;
    if (kind == MixingKind::SpecialOrthogonal) {
        if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "dimension must be at least 1");
        spec.rotation = random_rotation(n, seed);
    } else {
        if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "coupling needs dimension >= 2");
        if (layers < 1) throw Error(ErrorCode::InvalidArgument, "coupling needs at least one layer");
        for (std::size_t k = 0; k < layers; ++k) spec.layers.push_back(random_layer(n, seed, k));
    }
    validate_mixing(spec);
    return spec;
}

void validate_mixing(const MixingSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.dimension);
    if (spec.kind == MixingKind::SpecialOrthogonal) {
        if (spec.rotation.rows() != n || spec.rotation.cols() != n || n < 1) {
            throw Error(ErrorCode::InvalidArgument, "rotation must be dimension x dimension");
        }
        const double ortho =
            (spec.rotation.transpose() * spec.rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        if (ortho > kOrthogonalityTol) throw Error(ErrorCode::InvalidArgument, "rotation is not orthogonal");
        if (std::abs(spec.rotation.determinant() - 1.0) > kOrthogonalityTol) {
            throw Error(ErrorCode::InvalidArgument, "rotation determinant is not +1");
        }
        return;
    }
    if (spec.dimension < 2) throw Error(ErrorCode::DimensionTooSmall, "coupling needs dimension >= 2");
    if (spec.layers.empty()) throw Error(ErrorCode::InvalidArgument, "coupling needs at least one layer");
    for (const auto& layer : spec.layers) {
        if (layer.split < 1 || layer.split >= spec.dimension) {
            throw Error(ErrorCode::InvalidArgument, "coupling split must lie in [1, dimension)");
        }
        const LayerView v = view_of(layer, spec.dimension);
        if (static_cast<Eigen::Index>(layer.coefficients.size()) != v.upd_size) {
            throw Error(ErrorCode::InvalidArgument, "coupling coefficient rows do not match the split");
        }
        for (const auto& row : layer.coefficients) {
            if (static_cast<Eigen::Index>(row.size()) != v.pass_size) {
                throw Error(ErrorCode::InvalidArgument, "coupling coefficient columns do not match the split");
            }
            for (const auto& c : row) {
                for (double x : c) {
                    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
                }
            }
        }
    }
}

Eigen::VectorXd forward_point(const MixingSpec& spec, const Eigen::VectorXd& z) {
    require_dimension(spec, z.size());
    if (spec.kind == MixingKind::SpecialOrthogonal) return spec.rotation * z;
    Eigen::VectorXd x = z;
    for (const auto& layer : spec.layers) {
        const LayerView v = view_of(layer, spec.dimension);
        x.segment(v.upd_begin, v.upd_size) += shift(layer, x.segment(v.pass_begin, v.pass_size));
    }
    return x;
}

Eigen::VectorXd inverse_point(const MixingSpec& spec, const Eigen::VectorXd& x) {
    require_dimension(spec, x.size());
    if (spec.kind == MixingKind::SpecialOrthogonal) return spec.rotation.transpose() * x;
    Eigen::VectorXd z = x;
    for (auto it = spec.layers.rbegin(); it != spec.layers.rend(); ++it) {
        const LayerView v = view_of(*it, spec.dimension);
        z.segment(v.upd_begin, v.upd_size) -= shift(*it, z.segment(v.pass_begin, v.pass_size));
    }
    return z;
}

SampleMatrix forward(const MixingSpec& spec, const SampleMatrix& z) { return apply_rows(spec, z, true, "x"); }

SampleMatrix inverse(const MixingSpec& spec, const SampleMatrix& x) {
    return apply_rows(spec, x, false, "zhat");
}

std::string mixing_to_json(const MixingSpec& spec) {
    json doc;
    doc["kind"] = to_string(spec.kind);
    doc["dimension"] = spec.dimension;
    doc["seed"] = spec.seed;
    if (spec.kind == MixingKind::SpecialOrthogonal) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < spec.rotation.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < spec.rotation.cols(); ++j) row.push_back(spec.rotation(i, j));
            rows.push_back(row);
        }
        doc["matrix"] = rows;
    } else {
        json layers = json::array();
        for (const auto& layer : spec.layers) {
            layers.push_back({{"split", layer.split},
                              {"condition_on", layer.condition_on_head ? "head" : "tail"},
                              {"coefficients", layer.coefficients}});
        }
        doc["layers"] = layers;
    }
    return doc.dump(2) + "\n";
}

MixingSpec parse_mixing_json(std::string_view text) {
    MixingSpec spec;
    try {
        const json doc = json::parse(text);
        spec.kind = parse_mixing_kind(doc.at("kind").get<std::string>());
        spec.dimension = doc.at("dimension").get<std::size_t>();
        spec.seed = doc.at("seed").get<std::uint64_t>();
        if (spec.kind == MixingKind::SpecialOrthogonal) {
            const auto& rows = doc.at("matrix");
            const auto n = static_cast<Eigen::Index>(spec.dimension);
            if (static_cast<Eigen::Index>(rows.size()) != n) {
                throw Error(ErrorCode::ParseError, "matrix row count differs from dimension");
            }
            spec.rotation.resize(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto& row = rows[static_cast<std::size_t>(i)];
                if (static_cast<Eigen::Index>(row.size()) != n) {
                    throw Error(ErrorCode::ParseError, "matrix column count differs from dimension");
                }
                for (Eigen::Index j = 0; j < n; ++j) spec.rotation(i, j) = row[static_cast<std::size_t>(j)].get<double>();
            }
        } else {
            for (const auto& l : doc.at("layers")) {
                CouplingLayer layer;
                layer.split = l.at("split").get<std::size_t>();
                const auto side = l.at("condition_on").get<std::string>();
                if (side != "head" && side != "tail") {
                    throw Error(ErrorCode::ParseError, "condition_on must be 'head' or 'tail'");
                }
                layer.condition_on_head = side == "head";
                layer.coefficients = l.at("coefficients").get<std::vector<std::vector<std::array<double, 3>>>>();
                spec.layers.push_back(std::move(layer));
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    validate_mixing(spec);
    return spec;
}

}  // namespace auxsel
