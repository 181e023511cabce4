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

#include "refgen/config.h"

#include <cstdio>
#include <set>

#include "refgen/errors.h"

namespace refgen {
namespace {

using nlohmann::json;

void require_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, where + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw Error(ErrorCode::kConfig, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& doc, const char* key, T& out, const std::string& where) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, where + "." + key + " has the wrong type");
  }
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& doc, const std::string& where) {
  if (!doc.is_array() || doc.size() != 3) {
    throw Error(ErrorCode::kConfig, where + " must be a 3-element array");
  }
  try {
    return Vec3{doc[0].get<double>(), doc[1].get<double>(), doc[2].get<double>()};
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, where + " must hold numbers");
  }
}

json condition_json(const ConditionTable& t) {
  json j = json::object();
  for (int s = 0; s < 3; ++s) {
    json colors = json::array();
    for (Color c : t.allowed_colors[s]) colors.push_back(color_name(c));
    j[std::string(shape_name(static_cast<Shape>(s)))] = colors;
  }
  return j;
}

ConditionTable condition_from(const json& doc, const std::string& where) {
  require_keys(doc, {"cube", "sphere", "cylinder"}, where);
  ConditionTable t;
  for (int s = 0; s < 3; ++s) {
    const std::string shape(shape_name(static_cast<Shape>(s)));
    if (!doc.contains(shape)) continue;
    for (const auto& c : doc[shape]) {
      auto v = c.is_string() ? parse_canonical(AttributeKind::kColor, c.get<std::string>())
                             : std::nullopt;
      if (!v) throw Error(ErrorCode::kConfig, where + "." + shape + " names an unknown color");
      t.allowed_colors[s].push_back(static_cast<Color>(*v));
    }
  }
  return t;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json camera_to_json(const CameraSpec& c) {
  return {{"eye", vec_json(c.eye)},       {"look_at", vec_json(c.look_at)},
          {"up", vec_json(c.up)},         {"vertical_fov", c.vertical_fov},
          {"width", c.width},             {"height", c.height}};
}

CameraSpec camera_from_json(const json& doc) {
  require_keys(doc, {"eye", "look_at", "up", "vertical_fov", "width", "height"}, "camera");
  CameraSpec c;
  if (doc.contains("eye")) c.eye = vec_from(doc["eye"], "camera.eye");
  if (doc.contains("look_at")) c.look_at = vec_from(doc["look_at"], "camera.look_at");
  if (doc.contains("up")) c.up = vec_from(doc["up"], "camera.up");
  read(doc, "vertical_fov", c.vertical_fov, "camera");
  read(doc, "width", c.width, "camera");
  read(doc, "height", c.height, "camera");
  return c;
}

void GeneratorConfig::validate() const {
  if (scene_count < 0) throw Error(ErrorCode::kConfig, "scenes must be >= 0");
  if (per_image < 1) throw Error(ErrorCode::kConfig, "per_image must be >= 1");
  scene.validate();
  generation.validate();
  for (const auto& [name, w] : family_weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kConfig, "weight of '" + name + "' must be >= 0");
  }
}

json GeneratorConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["scenes"] = scene_count;
  j["per_image"] = per_image;
  j["scene"] = {{"min_objects", scene.min_objects},
                {"max_objects", scene.max_objects},
                {"plane_extent", scene.plane_extent},
                {"min_distance", scene.min_distance},
                {"relation_margin", scene.relation_margin},
                {"max_placement_attempts", scene.max_placement_attempts},
                {"large_radius", scene.large_radius},
                {"small_radius", scene.small_radius},
                {"split", split_condition_name(scene.split)},
                {"condition_a", condition_json(scene.condition_a)},
                {"condition_b", condition_json(scene.condition_b)}};
  j["camera"] = camera_to_json(scene.camera);
  j["generation"] = {{"retry_cap", generation.retry_cap},
                     {"family_attempts", generation.family_attempts},
                     {"anchor_retries", generation.anchor_retries},
                     {"decoration_probability", generation.decoration_probability},
                     {"false_premise_min_filters", generation.false_premise_min_filters},
                     {"synonyms", generation.synonyms == SynonymPolicy::kRandom ? "random"
                                                                                : "canonical"}};
  j["family_weights"] = family_weights;
  return j;
}

GeneratorConfig GeneratorConfig::from_json(const json& doc) {
  require_keys(doc, {"seed", "scenes", "per_image", "scene", "camera", "generation",
                     "family_weights"},
               "config");
  GeneratorConfig c;
  read(doc, "seed", c.seed, "config");
  read(doc, "scenes", c.scene_count, "config");
  read(doc, "per_image", c.per_image, "config");
  if (doc.contains("scene")) {
    const json& s = doc["scene"];
    require_keys(s,
                 {"min_objects", "max_objects", "plane_extent", "min_distance",
                  "relation_margin", "max_placement_attempts", "large_radius", "small_radius",
                  "split", "condition_a", "condition_b"},
                 "scene");
    read(s, "min_objects", c.scene.min_objects, "scene");
    read(s, "max_objects", c.scene.max_objects, "scene");
    read(s, "plane_extent", c.scene.plane_extent, "scene");
    read(s, "min_distance", c.scene.min_distance, "scene");
    read(s, "relation_margin", c.scene.relation_margin, "scene");
    read(s, "max_placement_attempts", c.scene.max_placement_attempts, "scene");
    read(s, "large_radius", c.scene.large_radius, "scene");
    read(s, "small_radius", c.scene.small_radius, "scene");
    if (s.contains("split")) {
      std::string name;
      read(s, "split", name, "scene");
      auto split = parse_split_condition(name);
      if (!split) throw Error(ErrorCode::kConfig, "scene.split must be none, A or B");
      c.scene.split = *split;
    }
    if (s.contains("condition_a")) c.scene.condition_a = condition_from(s["condition_a"], "scene.condition_a");
    if (s.contains("condition_b")) c.scene.condition_b = condition_from(s["condition_b"], "scene.condition_b");
  }
  if (doc.contains("camera")) c.scene.camera = camera_from_json(doc["camera"]);
  if (doc.contains("generation")) {
    const json& g = doc["generation"];
    require_keys(g,
                 {"retry_cap", "family_attempts", "anchor_retries", "decoration_probability",
                  "false_premise_min_filters", "synonyms"},
                 "generation");
    read(g, "retry_cap", c.generation.retry_cap, "generation");
    read(g, "family_attempts", c.generation.family_attempts, "generation");
    read(g, "anchor_retries", c.generation.anchor_retries, "generation");
    read(g, "decoration_probability", c.generation.decoration_probability, "generation");
    read(g, "false_premise_min_filters", c.generation.false_premise_min_filters, "generation");
    if (g.contains("synonyms")) {
      std::string policy;
      read(g, "synonyms", policy, "generation");
      if (policy == "random") {
        c.generation.synonyms = SynonymPolicy::kRandom;
      } else if (policy == "canonical") {
        c.generation.synonyms = SynonymPolicy::kCanonical;
      } else {
        throw Error(ErrorCode::kConfig, "generation.synonyms must be random or canonical");
      }
    }
  }
  read(doc, "family_weights", c.family_weights, "config");
  c.validate();
  return c;
}

std::string GeneratorConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json().dump())));
  return buf;
}

void GeneratorConfig::apply_weights(TemplateCatalog& catalog) const {
  for (const auto& [name, w] : family_weights) catalog.set_weight(name, w);
}

}  // namespace refgen
