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

#ifndef REFGEN_EXECUTOR_H_
#define REFGEN_EXECUTOR_H_

#include <span>
#include <vector>

#include "refgen/object_set.h"
#include "refgen/program.h"
#include "refgen/render.h"
#include "refgen/scene.h"

namespace refgen {

// Referent set of every program node, in node order.
struct StepTrace {
  std::vector<ObjectSet> steps;

  const ObjectSet& final_set() const { return steps.back(); }
  int size() const { return static_cast<int>(steps.size()); }
  bool operator==(const StepTrace&) const = default;
};

// Evaluates one node given its input sets. `render` may be null unless the
// node is `visible`. Throws Error with kNonUniqueReferent (unique on a
// non-singleton), kRankOutOfRange, kArityViolation (relate/same on a
// non-singleton, or wrong input count), kUndefinedRatio (visible over an
// off-screen object) or kInvalidValue.
ObjectSet eval_node(const ProgramNode& node, std::span<const ObjectSet> inputs,
                    const SceneGraph& scene, const RenderResult* render);

// Evaluates every node in order. Errors are rethrown as ExecutionError
// carrying the failing node index. The final set may be empty.
StepTrace execute(const Program& program, const SceneGraph& scene,
                  const RenderResult* render);

}  // namespace refgen

#endif  // REFGEN_EXECUTOR_H_
