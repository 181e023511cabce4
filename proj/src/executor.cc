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

#include "refgen/executor.h"

#include <string>

#include "refgen/errors.h"

namespace refgen {
namespace {

int require_singleton(const ObjectSet& s, Function f) {
  if (s.size() != 1) {
    throw Error(ErrorCode::kArityViolation,
                std::string(function_name(f)) + " needs a single anchor, got " +
                    std::to_string(s.size()) + " objects");
  }
  return s.first();
}

}  // namespace

ObjectSet eval_node(const ProgramNode& node, std::span<const ObjectSet> inputs,
                    const SceneGraph& scene, const RenderResult* render) {
  const Function f = node.function;
  if (static_cast<int>(inputs.size()) != function_arity(f)) {
    throw Error(ErrorCode::kArityViolation,
                std::string(function_name(f)) + " expects " +
                    std::to_string(function_arity(f)) + " inputs, got " +
                    std::to_string(inputs.size()));
  }
  if (static_cast<int>(node.value_inputs.size()) != function_value_arity(f)) {
    throw Error(ErrorCode::kArityViolation,
                std::string(function_name(f)) + " expects " +
                    std::to_string(function_value_arity(f)) + " value inputs");
  }

  if (auto kind = filter_kind(f)) {
    auto value = parse_canonical(*kind, node.value_inputs[0]);
    if (!value) {
      throw Error(ErrorCode::kInvalidValue, "unknown " +
                                                std::string(attribute_kind_name(*kind)) +
                                                " '" + node.value_inputs[0] + "'");
    }
    ObjectSet out;
    for (int id : inputs[0]) {
      if (scene.object(id).attributes.get(*kind) == *value) out.insert(id);
    }
    return out;
  }
  if (auto kind = same_kind(f)) {
    const int anchor = require_singleton(inputs[0], f);
    const int value = scene.object(anchor).attributes.get(*kind);
    ObjectSet out;
    for (const ObjectSpec& o : scene.objects) {
      if (o.id != anchor && o.attributes.get(*kind) == value) out.insert(o.id);
    }
    return out;
  }

  switch (f) {
    case Function::kScene:
      return scene.all_ids();
    case Function::kUnique:
      if (inputs[0].size() != 1) {
        throw Error(ErrorCode::kNonUniqueReferent,
                    "unique over " + std::to_string(inputs[0].size()) + " objects");
      }
      return inputs[0];
    case Function::kRelate: {
      const int anchor = require_singleton(inputs[0], f);
      auto dir = parse_direction(node.value_inputs[0]);
      if (!dir) throw Error(ErrorCode::kInvalidValue, "unknown direction '" + node.value_inputs[0] + "'");
      return spatial_related(scene, anchor, *dir);
    }
    case Function::kAnd:
      return inputs[0] & inputs[1];
    case Function::kOr:
      return inputs[0] | inputs[1];
    case Function::kOrdinal: {
      const int rank = parse_rank(node.value_inputs[0]);
      auto dir = parse_direction(node.value_inputs[1]);
      if (!dir) throw Error(ErrorCode::kInvalidValue, "unknown direction '" + node.value_inputs[1] + "'");
      if (rank > inputs[0].size()) {
        throw Error(ErrorCode::kRankOutOfRange,
                    "rank " + std::to_string(rank) + " of " +
                        std::to_string(inputs[0].size()) + " objects");
      }
      const std::vector<int> order = order_along(scene, inputs[0], *dir);
      return ObjectSet{order[rank - 1]};
    }
    case Function::kVisible: {
      auto flag = parse_visibility(node.value_inputs[0]);
      if (!flag || *flag == Visibility::kAmbiguous) {
        throw Error(ErrorCode::kInvalidValue, "bad visibility flag '" + node.value_inputs[0] + "'");
      }
      if (render == nullptr) {
        throw Error(ErrorCode::kUndefinedRatio, "visible needs a render of the scene");
      }
      ObjectSet out;
      for (int id : inputs[0]) {
        if (id >= static_cast<int>(render->objects.size())) {
          throw Error(ErrorCode::kInvalidReference, "object " + std::to_string(id) + " not rendered");
        }
        const ObjectRender& r = render->objects[id];
        if (!r.visibility) {
          throw Error(ErrorCode::kUndefinedRatio,
                      "object " + std::to_string(id) + " is off-screen");
        }
        if (*r.visibility == *flag) out.insert(id);
      }
      return out;
    }
    default:
      break;
  }
  throw Error(ErrorCode::kUnknownFunction, std::string(function_name(f)));
}

StepTrace execute(const Program& program, const SceneGraph& scene,
                  const RenderResult* render) {
  StepTrace trace;
  trace.steps.reserve(program.size());
  std::vector<ObjectSet> inputs;
  for (int i = 0; i < program.size(); ++i) {
    const ProgramNode& node = program.node(i);
    inputs.clear();
    for (int in : node.inputs) inputs.push_back(trace.steps[in]);
    try {
      trace.steps.push_back(eval_node(node, inputs, scene, render));
    } catch (const ExecutionError&) {
      throw;
    } catch (const Error& e) {
      throw ExecutionError(e.code(), i, e.what());
    }
  }
  return trace;
}

}  // namespace refgen
