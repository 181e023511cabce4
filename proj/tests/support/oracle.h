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

// Second interpreter for functional programs, used only to cross-check the
// executor. It walks the program JSON recursively from each node, keeps sets
// as std::set<int>, and carries its own vocabulary tables and geometry, so a
// bug in the library's lookup or set code does not cancel out.

#ifndef REFGEN_TESTS_SUPPORT_ORACLE_H_
#define REFGEN_TESTS_SUPPORT_ORACLE_H_

#include <optional>
#include <set>
#include <vector>

#include "json.hpp"
#include "refgen/render.h"
#include "refgen/scene.h"

namespace refgen::testing {

using IdSet = std::set<int>;

// Referent set of `node`, or nullopt when evaluation fails anywhere in its
// ancestry (non-unique referent, rank out of range, bad anchor, ...).
std::optional<IdSet> oracle_eval(const nlohmann::json& program, int node,
                                 const SceneGraph& scene, const RenderResult* render);

// Per-node sets; nullopt at and after the first failing node.
std::vector<std::optional<IdSet>> oracle_trace(const nlohmann::json& program,
                                               const SceneGraph& scene,
                                               const RenderResult* render);

// Brute-force relate and ordinal, shared with the scene tests.
IdSet oracle_related(const SceneGraph& scene, int anchor, const std::string& direction);
std::vector<int> oracle_order(const SceneGraph& scene, const IdSet& ids,
                              const std::string& direction);

}  // namespace refgen::testing

#endif  // REFGEN_TESTS_SUPPORT_ORACLE_H_
