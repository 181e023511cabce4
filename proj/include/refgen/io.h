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

// JSON documents for scenes, renders, dataset manifests and predictions. Every
// top-level document carries "format_version" ("<major>.<minor>") and a
// "kind"; readers accept major version 1 only. Layouts are described in
// docs/formats.md.

#ifndef REFGEN_IO_H_
#define REFGEN_IO_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "refgen/eval.h"
#include "refgen/generator.h"
#include "refgen/render.h"
#include "refgen/scene.h"

namespace refgen {

inline constexpr std::string_view kFormatVersion = "1.0";

// Throws Error(kUnsupportedVersion) for another major version and
// Error(kFormat) for a missing version or a different kind.
void check_document(const nlohmann::json& document, std::string_view kind);

nlohmann::json object_set_to_json(const ObjectSet& ids);
ObjectSet object_set_from_json(const nlohmann::json& document);

nlohmann::json scene_to_json(const SceneGraph& scene);
SceneGraph scene_from_json(const nlohmann::json& document);
nlohmann::json scenes_document(const std::vector<SceneGraph>& scenes);
std::vector<SceneGraph> scenes_from_document(const nlohmann::json& document);

nlohmann::json render_to_json(const RenderResult& render, const SceneGraph& scene);
nlohmann::json renders_document(const std::vector<SceneGraph>& scenes,
                                const std::vector<RenderResult>& renders);

nlohmann::json expression_to_json(const RefExpression& e);
// The trace is rebuilt from step_referents; consistency with the program is
// left to validate_manifest.
RefExpression expression_from_json(const nlohmann::json& document);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& document);

// Re-executes every stored program against its scene and compares the stored
// referents, flags and counts. Returns one message per problem, each naming
// the expression id; empty when the manifest is consistent.
std::vector<std::string> validate_manifest(const nlohmann::json& document);

// One JSON record per line:
//   {"expression_id": n, "rle_mask": "..." | "candidate_id": k,
//    "step_rle_masks": ["...", ...]}
// Throws Error(kPrediction) naming the line for malformed records.
std::vector<Prediction> read_predictions(std::istream& in, int width, int height);
std::string prediction_to_line(const Prediction& p);

// Documents are written with sorted keys and a trailing newline, so equal
// documents produce equal bytes.
std::string dump_document(const nlohmann::json& document);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace refgen

#endif  // REFGEN_IO_H_
