// Copyright 2026 The Refgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "refgen/errors.h"

namespace refgen {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidReference: return "invalid-reference";
    case ErrorCode::kSamplingExhausted: return "sampling-exhausted";
    case ErrorCode::kNonUniqueReferent: return "non-unique-referent";
    case ErrorCode::kRankOutOfRange: return "rank-out-of-range";
    case ErrorCode::kArityViolation: return "arity-violation";
    case ErrorCode::kUnknownFunction: return "unknown-function";
    case ErrorCode::kCycle: return "cycle";
    case ErrorCode::kDanglingInput: return "dangling-input";
    case ErrorCode::kUnorderedProgram: return "unordered-program";
    case ErrorCode::kUnreachableNode: return "unreachable-node";
    case ErrorCode::kInvalidValue: return "invalid-value";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kTemplate: return "template";
    case ErrorCode::kGenerationExhausted: return "generation-exhausted";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kCorruptMask: return "corrupt-mask";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kTraceMismatch: return "trace-mismatch";
    case ErrorCode::kPrediction: return "prediction";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

ExecutionError::ExecutionError(ErrorCode code, int node_index,
                               const std::string& message)
    : Error(code, "node " + std::to_string(node_index) + ": " + message),
      node_index_(node_index) {}

}  // namespace refgen
