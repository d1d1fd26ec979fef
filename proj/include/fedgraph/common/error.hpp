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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fedgraph {

enum class ErrorCode {
  kIndexOutOfRange,
  kDimensionMismatch,
  kNonFiniteFeature,
  kEmptySet,
  kEmptySegment,
  kInvalidRate,
  kHeadDivisibility,
  kEmptyGraph,
  kAllLabelsMasked,
  kEmptyDataset,
  kInvalidAlpha,
  kMoreClientsThanSamples,
  kMissingCategory,
  kTooManyEgos,
  kEmptyShard,
  kEmptyUpdateSet,
  kLayoutMismatch,
  kInvalidCount,
  kTransportFailure,
  kInsufficientShares,
  kDuplicateEvaluationPoint,
  kInsufficientSurvivors,
  kDropoutUnsupported,
  kUnknownParticipant,
  kTimeout,
  kConnectionClosed,
  kTruncatedFrame,
  kUnknownType,
  kLengthMismatch,
  kCorruptHeader,
  kSingleClass,
  kEmptyInput,
  kParseError,
  kSchemaViolation,
  kInvalidParams,
  kInvalidConfig,
};

std::string_view error_code_name(ErrorCode code);

// Every recoverable failure in the library surfaces as this exception type;
// callers branch on code() rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace fedgraph
