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

#ifndef REFGEN_CONFIG_H_
#define REFGEN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "refgen/generator.h"
#include "refgen/scene.h"
#include "refgen/templates.h"

namespace refgen {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int scene_count = 100;
  int per_image = 10;
  SceneConfig scene;  // includes the camera and render resolution
  GenerationOptions generation;
  // Family name -> sampling weight, replacing the catalog default.
  std::map<std::string, double> family_weights;

  // Throws Error(kConfig) for values outside their documented ranges.
  void validate() const;
  // Canonical document; keys are sorted, so equal configs dump equal bytes.
  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys raise Error(kConfig).
  static GeneratorConfig from_json(const nlohmann::json& document);
  // FNV-1a of the canonical document, 16 hex digits.
  std::string hash() const;

  // Applies family_weights to `catalog`.
  void apply_weights(TemplateCatalog& catalog) const;
};

std::uint64_t fnv1a64(std::string_view bytes);

nlohmann::json camera_to_json(const CameraSpec& camera);
CameraSpec camera_from_json(const nlohmann::json& document);

}  // namespace refgen

#endif  // REFGEN_CONFIG_H_
