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

#include "auxsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "auxsel/error.hpp"

namespace auxsel {

using json = nlohmann::ordered_json;

namespace {

inline constexpr std::size_t kMaxAssignment = 64;
inline constexpr double kDegenerateSum = 1e-12;

/// Centred column scaled to unit max-abs.
Eigen::MatrixXd normalized_columns(const SampleMatrix& m, const std::vector<std::string>& labels) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    const double count = static_cast<double>(m.rows());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mean = m.data.col(j).sum() / count;
        out.col(j) = m.data.col(j).array() - mean;
        const double scale = out.col(j).cwiseAbs().maxCoeff();
        if (!(scale > 0.0)) {
            const std::string name =
                static_cast<std::size_t>(j) < labels.size() ? labels[static_cast<std::size_t>(j)] : std::to_string(j);
            throw Error(ErrorCode::ConstantColumn, "column '" + name + "' is constant");
        }
        out.col(j) /= scale;
    }
    return out;
}

void require_square(const CorrelationMatrix& corr) {
    if (corr.values.rows() != corr.values.cols()) {
        throw Error(ErrorCode::NonSquare, std::to_string(corr.values.rows()) + "x" +
                                              std::to_string(corr.values.cols()) + " correlation matrix");
    }
}

/// Minimum-cost assignment on a square matrix (Hungarian method with potentials).
std::vector<std::size_t> hungarian_min(const Eigen::MatrixXd& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is the virtual start.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
    return assignment;
}

/// Shannon entropy of the normalized weights, logarithm base `base`.
double normalized_entropy(std::vector<double> weights, double base) {
    // Fixed summation order regardless of how the caller's columns are arranged.
    std::sort(weights.begin(), weights.end());
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum > kDegenerateSum)) throw Error(ErrorCode::DegenerateMatrix, "weights sum to zero; entropy undefined");

    std::size_t support = 0;
    bool uniform = true;
    double first = 0.0;
    for (double w : weights) {
        if (w == 0.0) continue;
        if (support == 0) first = w;
        uniform = uniform && w == first;
        ++support;
    }
    const double log_base = std::log(base);
    // Equal weights over k outcomes: the entropy is exactly log k.
    if (uniform) return std::log(static_cast<double>(support)) / log_base;

    double h = 0.0;
    for (double w : weights) {
        if (w == 0.0) continue;
        const double p = w / sum;
        h -= p * std::log(p);
    }
    return std::clamp(h / log_base, 0.0, 1.0);
}

double mean_of_sorted(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

CorrelationMatrix correlation_matrix(const SampleMatrix& z, const SampleMatrix& z_hat) {
    if (z.rows() != z_hat.rows()) {
        throw Error(ErrorCode::RowCountMismatch, std::to_string(z.rows()) + " vs " + std::to_string(z_hat.rows()) +
                                                     " rows");
    }
    if (z.rows() < 3) throw Error(ErrorCode::TooFewSamples, "correlation needs at least 3 rows");

    const Eigen::MatrixXd a = normalized_columns(z, z.labels);
    const Eigen::MatrixXd b = normalized_columns(z_hat, z_hat.labels);
    const Eigen::VectorXd norm_a = a.colwise().squaredNorm().transpose();
    const Eigen::VectorXd norm_b = b.colwise().squaredNorm().transpose();

    CorrelationMatrix out;
    out.row_labels = z.labels;
    out.col_labels = z_hat.labels;
    out.values.resize(a.cols(), b.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            const double r = a.col(i).dot(b.col(j)) / std::sqrt(norm_a(i) * norm_b(j));
            out.values(i, j) = std::clamp(r, -1.0, 1.0);
        }
    }
    return out;
}

Assignment best_permutation(const CorrelationMatrix& corr) {
    require_square(corr);
    const auto n = static_cast<std::size_t>(corr.values.rows());
    if (n > kMaxAssignment) {
        throw Error(ErrorCode::InvalidArgument, "assignment limited to " + std::to_string(kMaxAssignment) + " latents");
    }
    Assignment out;
    if (n == 0) return out;
    const Eigen::MatrixXd abs_corr = corr.values.cwiseAbs();
    out.permutation = hungarian_min(-abs_corr);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += abs_corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.permutation[i]));
    }
    out.mcc = total / static_cast<double>(n);
    return out;
}

DciScores dci_scores(const CorrelationMatrix& corr) {
    require_square(corr);
    const Eigen::Index n = corr.values.rows();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "DCI needs at least 2 latents");
    const Eigen::MatrixXd r = corr.values.cwiseAbs();
    const double base = static_cast<double>(n);

    std::vector<double> row_scores, col_scores;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> w;
        for (Eigen::Index j = 0; j < n; ++j) w.push_back(r(i, j));
        row_scores.push_back(1.0 - normalized_entropy(std::move(w), base));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<double> w;
        for (Eigen::Index i = 0; i < n; ++i) w.push_back(r(i, j));
        col_scores.push_back(1.0 - normalized_entropy(std::move(w), base));
    }
    return DciScores{mean_of_sorted(std::move(row_scores)), mean_of_sorted(std::move(col_scores))};
}

EvalReport evaluate(const SampleMatrix& z, const SampleMatrix& z_hat) {
    EvalReport report;
    report.correlation = correlation_matrix(z, z_hat);
    const Assignment a = best_permutation(report.correlation);
    const DciScores s = dci_scores(report.correlation);
    report.permutation = a.permutation;
    report.mcc = a.mcc;
    report.disentanglement = s.disentanglement;
    report.completeness = s.completeness;
    return report;
}

std::string eval_report_to_json(const EvalReport& report) {
    json doc;
    doc["true_labels"] = report.correlation.row_labels;
    doc["estimate_labels"] = report.correlation.col_labels;
    doc["correlation"] = matrix_json(report.correlation.values);
    doc["permutation"] = report.permutation;
    doc["mcc"] = report.mcc;
    doc["disentanglement"] = report.disentanglement;
    doc["completeness"] = report.completeness;
    doc["config"] = {{"matching", "exact assignment maximizing the sum of |corr|"},
                     {"dci_weights", "|corr|"},
                     {"entropy_base", "n"},
                     {"aggregation", "unweighted mean"},
                     {"degenerate_sum_tolerance", kDegenerateSum}};
    return doc.dump(2) + "\n";
}

}  // namespace auxsel
