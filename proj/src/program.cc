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

#include <algorithm>
#include <array>
#include <charconv>

#include "refgen/errors.h"

namespace refgen {
namespace {

constexpr std::array<std::string_view, kFunctionCount> kNames = {
    "scene",      "filter_color", "filter_size",   "filter_shape", "filter_material",
    "unique",     "relate",       "same_color",    "same_size",    "same_shape",
    "same_material", "and",       "or",            "ordinal",      "visible"};

std::string where(int index) { return "node " + std::to_string(index); }

void validate_values(const ProgramNode& node, int index) {
  const Function f = node.function;
  const auto& v = node.value_inputs;
  if (static_cast<int>(v.size()) != function_value_arity(f)) {
    throw Error(ErrorCode::kArityViolation,
                where(index) + " (" + std::string(function_name(f)) + ") expects " +
                    std::to_string(function_value_arity(f)) + " value inputs, got " +
                    std::to_string(v.size()));
  }
  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::kInvalidValue, where(index) + " (" +
                                              std::string(function_name(f)) +
                                              "): " + what);
  };
  if (auto kind = filter_kind(f)) {
    if (!parse_canonical(*kind, v[0])) bad("unknown " + std::string(attribute_kind_name(*kind)) + " '" + v[0] + "'");
  } else if (f == Function::kRelate) {
    if (!parse_direction(v[0])) bad("unknown direction '" + v[0] + "'");
  } else if (f == Function::kOrdinal) {
    parse_rank(v[0]);
    if (!parse_direction(v[1])) bad("unknown direction '" + v[1] + "'");
  } else if (f == Function::kVisible) {
    auto flag = parse_visibility(v[0]);
    if (!flag || *flag == Visibility::kAmbiguous) {
      bad("visibility flag must be fully_visible or partially_visible, got '" + v[0] + "'");
    }
  }
}

}  // namespace

std::string_view function_name(Function f) { return kNames[static_cast<int>(f)]; }

std::optional<Function> parse_function(std::string_view name) {
  for (int i = 0; i < kFunctionCount; ++i) {
    if (kNames[i] == name) return static_cast<Function>(i);
  }
  return std::nullopt;
}

int function_arity(Function f) {
  switch (f) {
    case Function::kScene: return 0;
    case Function::kAnd:
    case Function::kOr: return 2;
    default: return 1;
  }
}

int function_value_arity(Function f) {
  switch (f) {
    case Function::kFilterColor:
    case Function::kFilterSize:
    case Function::kFilterShape:
    case Function::kFilterMaterial:
    case Function::kRelate:
    case Function::kVisible: return 1;
    case Function::kOrdinal: return 2;
    default: return 0;
  }
}

std::optional<AttributeKind> filter_kind(Function f) {
  switch (f) {
    case Function::kFilterColor: return AttributeKind::kColor;
    case Function::kFilterSize: return AttributeKind::kSize;
    case Function::kFilterShape: return AttributeKind::kShape;
    case Function::kFilterMaterial: return AttributeKind::kMaterial;
    default: return std::nullopt;
  }
}

std::optional<AttributeKind> same_kind(Function f) {
  switch (f) {
    case Function::kSameColor: return AttributeKind::kColor;
    case Function::kSameSize: return AttributeKind::kSize;
    case Function::kSameShape: return AttributeKind::kShape;
    case Function::kSameMaterial: return AttributeKind::kMaterial;
    default: return std::nullopt;
  }
}

Function filter_function(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kColor: return Function::kFilterColor;
    case AttributeKind::kSize: return Function::kFilterSize;
    case AttributeKind::kShape: return Function::kFilterShape;
    case AttributeKind::kMaterial: return Function::kFilterMaterial;
  }
  return Function::kFilterColor;
}

Function same_function(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kColor: return Function::kSameColor;
    case AttributeKind::kSize: return Function::kSameSize;
    case AttributeKind::kShape: return Function::kSameShape;
    case AttributeKind::kMaterial: return Function::kSameMaterial;
  }
  return Function::kSameColor;
}

std::string_view topology_name(Topology t) {
  return t == Topology::kChain ? "chain" : "tree";
}

int parse_rank(const std::string& text) {
  int rank = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rank);
  if (ec != std::errc() || ptr != text.data() + text.size() || rank < 1) {
    throw Error(ErrorCode::kInvalidValue, "ordinal rank must be a positive integer, got '" +
                                              text + "'");
  }
  return rank;
}

Program Program::from_nodes(std::vector<ProgramNode> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::kFormat, "program has no nodes");
  const int n = static_cast<int>(nodes.size());

  for (int i = 0; i < n; ++i) {
    const ProgramNode& node = nodes[i];
    if (static_cast<int>(node.inputs.size()) != function_arity(node.function)) {
      throw Error(ErrorCode::kArityViolation,
                  where(i) + " (" + std::string(function_name(node.function)) +
                      ") expects " + std::to_string(function_arity(node.function)) +
                      " inputs, got " + std::to_string(node.inputs.size()));
    }
    for (int in : node.inputs) {
      if (in < 0 || in >= n) {
        throw Error(ErrorCode::kDanglingInput,
                    where(i) + " references missing node " + std::to_string(in));
      }
    }
    validate_values(node, i);
  }

  // Cycle detection by iterative DFS over input edges.
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  for (int start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack = {{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < nodes[v].inputs.size()) {
        const int w = nodes[v].inputs[next++];
        if (state[w] == 1) {
          throw Error(ErrorCode::kCycle, "cycle through " + where(w));
        }
        if (state[w] == 0) {
          state[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int in : nodes[i].inputs) {
      if (in >= i) {
        throw Error(ErrorCode::kUnorderedProgram,
                    where(i) + " consumes later " + where(in) +
                        "; nodes must be topologically ordered");
      }
    }
  }

  std::vector<bool> reachable(n, false);
  reachable[n - 1] = true;
  for (int i = n - 1; i >= 0; --i) {
    if (!reachable[i]) {
      throw Error(ErrorCode::kUnreachableNode, where(i) + " does not feed the root");
    }
    for (int in : nodes[i].inputs) reachable[in] = true;
  }
  return Program(std::move(nodes));
}

Topology Program::topology() const {
  return contains(Function::kAnd) || contains(Function::kOr) ? Topology::kTree
                                                             : Topology::kChain;
}

bool Program::contains(Function f) const { return count(f) > 0; }

int Program::count(Function f) const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [f](const ProgramNode& n) { return n.function == f; }));
}

Program parse_program(const nlohmann::json& document) {
  if (!document.is_array()) {
    throw Error(ErrorCode::kFormat, "program document must be an array of nodes");
  }
  std::vector<ProgramNode> nodes;
  nodes.reserve(document.size());
  for (std::size_t i = 0; i < document.size(); ++i) {
    const auto& j = document[i];
    const std::string at = "node " + std::to_string(i);
    if (!j.is_object() || !j.contains("function") || !j["function"].is_string()) {
      throw Error(ErrorCode::kFormat, at + " lacks a string 'function'");
    }
    const std::string name = j["function"].get<std::string>();
    auto f = parse_function(name);
    if (!f) throw Error(ErrorCode::kUnknownFunction, at + ": '" + name + "'");
    ProgramNode node;
    node.function = *f;
    if (j.contains("value_inputs")) {
      if (!j["value_inputs"].is_array()) {
        throw Error(ErrorCode::kFormat, at + ": value_inputs must be an array");
      }
      for (const auto& v : j["value_inputs"]) {
        if (!v.is_string()) throw Error(ErrorCode::kFormat, at + ": value_inputs must be strings");
        node.value_inputs.push_back(v.get<std::string>());
      }
    }
    if (j.contains("inputs")) {
      if (!j["inputs"].is_array()) throw Error(ErrorCode::kFormat, at + ": inputs must be an array");
      for (const auto& v : j["inputs"]) {
        if (!v.is_number_integer()) {
          throw Error(ErrorCode::kFormat, at + ": inputs must be integers");
        }
        node.inputs.push_back(v.get<int>());
      }
    }
    nodes.push_back(std::move(node));
  }
  return Program::from_nodes(std::move(nodes));
}

Program parse_program_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kFormat, std::string("program is not valid JSON: ") + e.what());
  }
  return parse_program(doc);
}

nlohmann::json emit_program(const Program& program) {
  nlohmann::json out = nlohmann::json::array();
  for (const ProgramNode& node : program.nodes()) {
    out.push_back({{"function", function_name(node.function)},
                   {"value_inputs", node.value_inputs},
                   {"inputs", node.inputs}});
  }
  return out;
}

}  // namespace refgen
