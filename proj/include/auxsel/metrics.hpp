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

#ifndef AUXSEL_METRICS_HPP
#define AUXSEL_METRICS_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "auxsel/sample_matrix.hpp"

namespace auxsel {

/// Pearson correlations, rows = true latents, columns = estimates. Signed.
struct CorrelationMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
};

struct Assignment {
    /// permutation[i] is the estimate column matched to true latent i.
    std::vector<std::size_t> permutation;
    double mcc = 0.0;
};

struct DciScores {
    double disentanglement = 0.0;
    double completeness = 0.0;
};

struct EvalReport {
    CorrelationMatrix correlation;
    std::vector<std::size_t> permutation;
    double mcc = 0.0;
    double disentanglement = 0.0;
    double completeness = 0.0;
};

/// Each column is centred and scaled by its largest absolute deviation before
/// the inner products, so a column mapped by an exactly representable affine
/// map yields a bitwise-identical |correlation|.
/// Throws RowCountMismatch, TooFewSamples (< 3 rows), ConstantColumn.
CorrelationMatrix correlation_matrix(const SampleMatrix& z, const SampleMatrix& z_hat);

/// Exact maximum of sum_i |corr(i, sigma(i))| via the Hungarian method.
/// Throws NonSquare, InvalidArgument (n > 64).
Assignment best_permutation(const CorrelationMatrix& corr);

/// Entropy-based scores on |corr| with logarithm base n, unweighted means over
/// rows (D) and columns (C). Throws NonSquare, InvalidArgument (n < 2),
/// DegenerateMatrix (a row or column of |corr| sums to <= 1e-12).
DciScores dci_scores(const CorrelationMatrix& corr);

EvalReport evaluate(const SampleMatrix& z, const SampleMatrix& z_hat);

std::string eval_report_to_json(const EvalReport& report);

}  // namespace auxsel

#endif  // AUXSEL_METRICS_HPP
