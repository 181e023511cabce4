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

#include "refgen/program.h"

#include <string>

#include "doctest.h"
#include "json.hpp"
#include "refgen/errors.h"

namespace refgen {
namespace {

using nlohmann::json;

ErrorCode parse_error(const std::string& text) {
  try {
    parse_program_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted " << text);
  return ErrorCode::kFormat;
}

TEST_CASE("function catalog") {
  for (int i = 0; i < kFunctionCount; ++i) {
    const Function f = static_cast<Function>(i);
    CHECK(parse_function(function_name(f)) == f);
  }
  CHECK(function_arity(Function::kScene) == 0);
  CHECK(function_arity(Function::kAnd) == 2);
  CHECK(function_arity(Function::kOr) == 2);
  CHECK(function_arity(Function::kOrdinal) == 1);
  CHECK(function_value_arity(Function::kOrdinal) == 2);
  CHECK(function_value_arity(Function::kUnique) == 0);
  CHECK(function_value_arity(Function::kVisible) == 1);
  CHECK(filter_kind(Function::kFilterShape) == AttributeKind::kShape);
  CHECK(same_kind(Function::kSameSize) == AttributeKind::kSize);
  CHECK_FALSE(parse_function("count").has_value());
  CHECK_FALSE(parse_function("exist").has_value());
}

TEST_CASE("parse and emit round-trip") {
  const std::string text = R"([
    {"function": "scene", "value_inputs": [], "inputs": []},
    {"function": "filter_color", "value_inputs": ["cyan"], "inputs": [0]},
    {"function": "filter_shape", "value_inputs": ["cube"], "inputs": [1]},
    {"function": "scene", "value_inputs": [], "inputs": []},
    {"function": "filter_size", "value_inputs": ["large"], "inputs": [3]},
    {"function": "ordinal", "value_inputs": ["2", "front"], "inputs": [4]},
    {"function": "or", "value_inputs": [], "inputs": [2, 5]}
  ])";
  const Program p = parse_program_text(text);
  CHECK(p.size() == 7);
  CHECK(p.root() == 6);
  CHECK(p.topology() == Topology::kTree);
  CHECK(p.count(Function::kScene) == 2);
  CHECK(parse_program(emit_program(p)) == p);
  CHECK(emit_program(p) == json::parse(text));
}

TEST_CASE("chain topology") {
  const Program p = parse_program_text(R"([
    {"function": "scene", "value_inputs": [], "inputs": []},
    {"function": "filter_color", "value_inputs": ["red"], "inputs": [0]},
    {"function": "unique", "value_inputs": [], "inputs": [1]},
    {"function": "relate", "value_inputs": ["left"], "inputs": [2]}
  ])");
  CHECK(p.topology() == Topology::kChain);
}

TEST_CASE("question-answering modules are unknown") {
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "count", "value_inputs": [], "inputs": [0]}])") ==
        ErrorCode::kUnknownFunction);
}

TEST_CASE("structural errors") {
  // and with one input
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "and", "value_inputs": [], "inputs": [0]}])") ==
        ErrorCode::kArityViolation);
  // filter without its value
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "filter_color", "value_inputs": [], "inputs": [0]}])") ==
        ErrorCode::kArityViolation);
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "unique", "value_inputs": [], "inputs": [4]}])") ==
        ErrorCode::kDanglingInput);
  CHECK(parse_error(R"([{"function": "unique", "value_inputs": [], "inputs": [0]}])") ==
        ErrorCode::kCycle);
  CHECK(parse_error(R"([{"function": "unique", "value_inputs": [], "inputs": [1]},
                       {"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "unique", "value_inputs": [], "inputs": [0]}])") ==
        ErrorCode::kUnorderedProgram);
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "scene", "value_inputs": [], "inputs": []}])") ==
        ErrorCode::kUnreachableNode);
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "filter_color", "value_inputs": ["pink"], "inputs": [0]}])") ==
        ErrorCode::kInvalidValue);
  CHECK(parse_error(R"([{"function": "scene", "value_inputs": [], "inputs": []},
                       {"function": "ordinal", "value_inputs": ["0", "left"], "inputs": [0]}])") ==
        ErrorCode::kInvalidValue);
  CHECK(parse_error(R"({"function": "scene"})") == ErrorCode::kFormat);
  CHECK(parse_error("[]") == ErrorCode::kFormat);
}

TEST_CASE("rank parsing") {
  CHECK(parse_rank("3") == 3);
  CHECK_THROWS_AS(parse_rank("three"), Error);
  CHECK_THROWS_AS(parse_rank("-1"), Error);
}

}  // namespace
}  // namespace refgen
