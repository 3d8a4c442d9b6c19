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

#include "auxsel/error.hpp"

namespace auxsel {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::InvalidId: return "InvalidId";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::GraphTooLarge: return "GraphTooLarge";
        case ErrorCode::OverlappingSets: return "OverlappingSets";
        case ErrorCode::NotObserved: return "NotObserved";
        case ErrorCode::NoObservedSources: return "NoObservedSources";
        case ErrorCode::NoCandidates: return "NoCandidates";
        case ErrorCode::NonGaussianNoise: return "NonGaussianNoise";
        case ErrorCode::SingularConditioning: return "SingularConditioning";
        case ErrorCode::SingularCovariance: return "SingularCovariance";
        case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteDensity: return "NonFiniteDensity";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::ConstantColumn: return "ConstantColumn";
        case ErrorCode::RowCountMismatch: return "RowCountMismatch";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_usage_error(ErrorCode code) {
    return code == ErrorCode::InvalidArgument || code == ErrorCode::ParseError ||
           code == ErrorCode::IoError;
}

}  // namespace auxsel
