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

// Functional programs: a topologically ordered DAG of module nodes whose last
// node is the root. The document form is a JSON array of
//   {"function": name, "value_inputs": [string...], "inputs": [index...]}
// which is the layout used by the dataset files.

#ifndef REFGEN_PROGRAM_H_
#define REFGEN_PROGRAM_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "refgen/vocab.h"

namespace refgen {

enum class Function {
  kScene,
  kFilterColor,
  kFilterSize,
  kFilterShape,
  kFilterMaterial,
  kUnique,
  kRelate,
  kSameColor,
  kSameSize,
  kSameShape,
  kSameMaterial,
  kAnd,
  kOr,
  kOrdinal,
  kVisible,
};

inline constexpr int kFunctionCount = 15;

std::string_view function_name(Function f);
std::optional<Function> parse_function(std::string_view name);

// Number of node inputs the function takes.
int function_arity(Function f);
// Number of value inputs the function takes.
int function_value_arity(Function f);

// Attribute kind of filter_X / same_X functions.
std::optional<AttributeKind> filter_kind(Function f);
std::optional<AttributeKind> same_kind(Function f);
Function filter_function(AttributeKind kind);
Function same_function(AttributeKind kind);

struct ProgramNode {
  Function function = Function::kScene;
  std::vector<std::string> value_inputs;
  std::vector<int> inputs;

  bool operator==(const ProgramNode&) const = default;
};

enum class Topology { kChain, kTree };
std::string_view topology_name(Topology t);

class Program {
 public:
  Program() = default;

  // Validates every structural invariant; throws Error with kArityViolation,
  // kDanglingInput, kCycle, kUnorderedProgram, kUnreachableNode, or
  // kInvalidValue.
  static Program from_nodes(std::vector<ProgramNode> nodes);

  const std::vector<ProgramNode>& nodes() const { return nodes_; }
  const ProgramNode& node(int i) const { return nodes_[i]; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return size() - 1; }
  // Tree iff some and/or node merges two reasoning paths.
  Topology topology() const;
  bool contains(Function f) const;
  int count(Function f) const;

  bool operator==(const Program&) const = default;

 private:
  explicit Program(std::vector<ProgramNode> nodes) : nodes_(std::move(nodes)) {}

  std::vector<ProgramNode> nodes_;
};

// Throws Error(kUnknownFunction) for names outside the catalog (including the
// question-answering modules such as "count" or "exist"), Error(kFormat) for
// malformed documents, and the structural errors of Program::from_nodes.
Program parse_program(const nlohmann::json& document);
Program parse_program_text(std::string_view text);
nlohmann::json emit_program(const Program& program);

// Value-input decoding shared by validation and execution.
int parse_rank(const std::string& text);  // throws Error(kInvalidValue)

}  // namespace refgen

#endif  // REFGEN_PROGRAM_H_
