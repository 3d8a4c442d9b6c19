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

#ifndef AUXSEL_SAMPLE_MATRIX_HPP
#define AUXSEL_SAMPLE_MATRIX_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace auxsel {

/// Rows are samples, columns are variables in node-id order.
struct SampleMatrix {
    Eigen::MatrixXd data;
    std::vector<std::string> labels;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
};

}  // namespace auxsel

#endif  // AUXSEL_SAMPLE_MATRIX_HPP
