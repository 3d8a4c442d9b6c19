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

#ifndef AUXSEL_ERROR_HPP
#define AUXSEL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace auxsel {

enum class ErrorCode {
    // graph construction
    CycleDetected,
    InvalidId,
    SelfLoop,
    DuplicateEdge,
    DuplicateLabel,
    GraphTooLarge,
    // queries
    OverlappingSets,
    NotObserved,
    NoObservedSources,
    NoCandidates,
    // simulation / linear algebra
    NonGaussianNoise,
    SingularConditioning,
    SingularCovariance,
    DimensionTooSmall,
    DimensionMismatch,
    NonFiniteDensity,
    TooFewSamples,
    // metrics
    ConstantColumn,
    RowCountMismatch,
    NonSquare,
    DegenerateMatrix,
    // plumbing
    InvalidArgument,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Usage and I/O failures, as opposed to domain failures raised by a valid request.
bool is_usage_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

}  // namespace auxsel

#endif  // AUXSEL_ERROR_HPP
