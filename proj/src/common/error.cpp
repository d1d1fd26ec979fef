/*
 * Copyright 2026 The FedGraph Authors
 *
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

#include "fedgraph/common/error.hpp"

namespace fedgraph {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kEmptySegment: return "EmptySegment";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kHeadDivisibility: return "HeadDivisibility";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kAllLabelsMasked: return "AllLabelsMasked";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kMoreClientsThanSamples: return "MoreClientsThanSamples";
    case ErrorCode::kMissingCategory: return "MissingCategory";
    case ErrorCode::kTooManyEgos: return "TooManyEgos";
    case ErrorCode::kEmptyShard: return "EmptyShard";
    case ErrorCode::kEmptyUpdateSet: return "EmptyUpdateSet";
    case ErrorCode::kLayoutMismatch: return "LayoutMismatch";
    case ErrorCode::kInvalidCount: return "InvalidCount";
    case ErrorCode::kTransportFailure: return "TransportFailure";
    case ErrorCode::kInsufficientShares: return "InsufficientShares";
    case ErrorCode::kDuplicateEvaluationPoint: return "DuplicateEvaluationPoint";
    case ErrorCode::kInsufficientSurvivors: return "InsufficientSurvivors";
    case ErrorCode::kDropoutUnsupported: return "DropoutUnsupported";
    case ErrorCode::kUnknownParticipant: return "UnknownParticipant";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kConnectionClosed: return "ConnectionClosed";
    case ErrorCode::kTruncatedFrame: return "TruncatedFrame";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace fedgraph
