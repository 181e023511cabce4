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

#ifndef REFGEN_ERRORS_H_
#define REFGEN_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace refgen {

// Every failure raised by the library carries one of these codes so callers
// (tests, the CLI) can branch on the kind of failure without parsing text.
enum class ErrorCode {
  kInvalidReference,    // unknown object id
  kSamplingExhausted,   // scene placement gave up
  kNonUniqueReferent,   // unique() on a set of size != 1
  kRankOutOfRange,      // ordinal rank > |set|
  kArityViolation,      // wrong input count, or relate/same on non-singleton
  kUnknownFunction,
  kCycle,
  kDanglingInput,
  kUnorderedProgram,    // forward reference that is not a cycle
  kUnreachableNode,
  kInvalidValue,        // bad value_inputs entry
  kUndefinedRatio,      // occlusion ratio of an off-screen object
  kTemplate,
  kGenerationExhausted,
  kDimensionMismatch,
  kCorruptMask,
  kFormat,
  kUnsupportedVersion,
  kConfig,
  kTraceMismatch,
  kPrediction,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the program executor; remembers which node failed.
class ExecutionError : public Error {
 public:
  ExecutionError(ErrorCode code, int node_index, const std::string& message);

  int node_index() const { return node_index_; }

 private:
  int node_index_;
};

}  // namespace refgen

#endif  // REFGEN_ERRORS_H_
