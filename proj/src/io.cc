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

#include "refgen/io.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "refgen/config.h"
#include "refgen/errors.h"
#include "refgen/executor.h"

namespace refgen {
namespace {

using nlohmann::json;

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorCode::kFormat, what);
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& doc, const std::string& where) {
  if (!doc.is_array() || doc.size() != 3 || !doc[0].is_number() || !doc[1].is_number() ||
      !doc[2].is_number()) {
    format_error(where + " must be an array of three numbers");
  }
  return Vec3{doc[0].get<double>(), doc[1].get<double>(), doc[2].get<double>()};
}

template <typename T>
T field(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) format_error(where + ": missing '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    format_error(where + ": '" + key + "' has the wrong type");
  }
}

int attribute_field(const json& o, AttributeKind kind, const std::string& where) {
  const std::string name(attribute_kind_name(kind));
  const auto text = field<std::string>(o, name.c_str(), where);
  auto v = parse_canonical(kind, text);
  if (!v) format_error(where + ": unknown " + name + " '" + text + "'");
  return *v;
}

json document_header(std::string_view kind) {
  return {{"format_version", kFormatVersion}, {"kind", kind}};
}

bool close_to(const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-9; }

Mask decode_prediction_mask(const json& value, int width, int height, const std::string& where) {
  if (!value.is_string()) format_error(where + ": mask must be an RLE string");
  try {
    return decode_rle(value.get<std::string>(), width, height);
  } catch (const Error& e) {
    throw Error(ErrorCode::kPrediction, where + ": " + e.what());
  }
}

}  // namespace

void check_document(const json& doc, std::string_view kind) {
  if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_string()) {
    format_error("document has no format_version");
  }
  const std::string version = doc["format_version"].get<std::string>();
  const std::size_t dot = version.find('.');
  if (dot == std::string::npos || dot == 0) format_error("malformed format_version '" + version + "'");
  const std::string major = version.substr(0, dot);
  const std::string supported(kFormatVersion.substr(0, kFormatVersion.find('.')));
  if (major != supported) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "format_version " + version + " is not supported (major " + supported + ")");
  }
  const std::string actual = doc.value("kind", std::string());
  if (actual != kind) {
    format_error("expected a '" + std::string(kind) + "' document, found '" + actual + "'");
  }
}

json object_set_to_json(const ObjectSet& ids) { return ids.to_vector(); }

ObjectSet object_set_from_json(const json& doc) {
  if (!doc.is_array()) format_error("object set must be an array");
  ObjectSet out;
  for (const auto& v : doc) {
    if (!v.is_number_integer()) format_error("object ids must be integers");
    const int id = v.get<int>();
    if (id < 0 || id >= ObjectSet::kMaxObjects) format_error("object id out of range");
    out.insert(id);
  }
  return out;
}

json scene_to_json(const SceneGraph& scene) {
  json objects = json::array();
  for (const ObjectSpec& o : scene.objects) {
    objects.push_back({{"id", o.id},
                       {"shape", shape_name(o.attributes.shape)},
                       {"size", size_name(o.attributes.size)},
                       {"color", color_name(o.attributes.color)},
                       {"material", material_name(o.attributes.material)},
                       {"3d_coords", vec_json(o.position)},
                       {"rotation", o.rotation},
                       {"base_radius", o.base_radius}});
  }
  return {{"index", scene.index},
          {"seed", scene.seed},
          {"split_condition", split_condition_name(scene.split)},
          {"relation_margin", scene.relation_margin},
          {"camera", camera_to_json(scene.camera)},
          {"directions",
           {{"left", vec_json(scene.directions.left)},
            {"right", vec_json(scene.directions.right)},
            {"front", vec_json(scene.directions.front)},
            {"behind", vec_json(scene.directions.behind)}}},
          {"objects", objects}};
}

SceneGraph scene_from_json(const json& doc) {
  SceneGraph scene;
  const std::string where = "scene";
  scene.index = field<int>(doc, "index", where);
  const std::string at = "scene " + std::to_string(scene.index);
  scene.seed = field<std::uint64_t>(doc, "seed", at);
  auto split = parse_split_condition(field<std::string>(doc, "split_condition", at));
  if (!split) format_error(at + ": unknown split_condition");
  scene.split = *split;
  scene.relation_margin = field<double>(doc, "relation_margin", at);
  try {
    scene.camera = camera_from_json(field<json>(doc, "camera", at));
    scene.camera.validate();
  } catch (const Error& e) {
    format_error(at + ": " + e.what());
  }
  const json dirs = field<json>(doc, "directions", at);
  scene.directions.left = vec_from(field<json>(dirs, "left", at), at + ".directions.left");
  scene.directions.right = vec_from(field<json>(dirs, "right", at), at + ".directions.right");
  scene.directions.front = vec_from(field<json>(dirs, "front", at), at + ".directions.front");
  scene.directions.behind = vec_from(field<json>(dirs, "behind", at), at + ".directions.behind");
  for (Direction d : kDirections) {
    if (std::abs(scene.directions[d].norm() - 1.0) > 1e-9) {
      format_error(at + ": direction " + std::string(direction_name(d)) + " is not unit length");
    }
  }
  if (!close_to(scene.directions.left, scene.directions.right * -1.0) ||
      !close_to(scene.directions.front, scene.directions.behind * -1.0)) {
    format_error(at + ": directions are not pairwise opposite");
  }
  const json objects = field<json>(doc, "objects", at);
  if (!objects.is_array()) format_error(at + ": objects must be an array");
  if (objects.size() > ObjectSet::kMaxObjects) format_error(at + ": too many objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const json& o = objects[i];
    const std::string ow = at + " object " + std::to_string(i);
    ObjectSpec spec;
    spec.id = field<int>(o, "id", ow);
    if (spec.id != static_cast<int>(i)) format_error(ow + ": ids must be 0..n-1 in order");
    spec.attributes.shape = static_cast<Shape>(attribute_field(o, AttributeKind::kShape, ow));
    spec.attributes.size = static_cast<Size>(attribute_field(o, AttributeKind::kSize, ow));
    spec.attributes.color = static_cast<Color>(attribute_field(o, AttributeKind::kColor, ow));
    spec.attributes.material =
        static_cast<Material>(attribute_field(o, AttributeKind::kMaterial, ow));
    spec.position = vec_from(field<json>(o, "3d_coords", ow), ow + ".3d_coords");
    spec.rotation = field<double>(o, "rotation", ow);
    spec.base_radius = field<double>(o, "base_radius", ow);
    if (!(spec.base_radius > 0.0)) format_error(ow + ": base_radius must be > 0");
    scene.objects.push_back(spec);
  }
  return scene;
}

json scenes_document(const std::vector<SceneGraph>& scenes) {
  json doc = document_header("scenes");
  doc["scenes"] = json::array();
  for (const SceneGraph& s : scenes) doc["scenes"].push_back(scene_to_json(s));
  return doc;
}

std::vector<SceneGraph> scenes_from_document(const json& doc) {
  check_document(doc, "scenes");
  std::vector<SceneGraph> out;
  for (const auto& s : field<json>(doc, "scenes", "scenes document")) {
    out.push_back(scene_from_json(s));
  }
  return out;
}

json render_to_json(const RenderResult& render, const SceneGraph& scene) {
  json objects = json::array();
  for (std::size_t i = 0; i < render.objects.size(); ++i) {
    const ObjectRender& r = render.objects[i];
    json o = {{"id", static_cast<int>(i)},
              {"off_screen", r.off_screen},
              {"camera_distance", r.camera_distance},
              {"full_rle", encode_rle(r.full_mask)},
              {"visible_rle", encode_rle(r.visible_mask)}};
    if (r.bbox) {
      o["bbox"] = {r.bbox->x0, r.bbox->y0, r.bbox->x1, r.bbox->y1};
      o["occlusion_ratio"] = r.occlusion_ratio;
      o["visibility"] = visibility_name(*r.visibility);
    } else {
      o["bbox"] = nullptr;
      o["occlusion_ratio"] = nullptr;
      o["visibility"] = nullptr;
    }
    objects.push_back(o);
  }
  return {{"scene_id", scene.index},
          {"width", render.width},
          {"height", render.height},
          {"objects", objects}};
}

json renders_document(const std::vector<SceneGraph>& scenes,
                      const std::vector<RenderResult>& renders) {
  json doc = document_header("renders");
  doc["renders"] = json::array();
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    doc["renders"].push_back(render_to_json(renders.at(i), scenes[i]));
  }
  return doc;
}

json expression_to_json(const RefExpression& e) {
  json steps = json::array();
  for (const ObjectSet& s : e.trace.steps) steps.push_back(object_set_to_json(s));
  return {{"expression_id", e.expression_id},
          {"scene_id", e.scene_id},
          {"family", e.family},
          {"category", category_name(e.category)},
          {"text", e.text},
          {"program", emit_program(e.program)},
          {"referred_ids", object_set_to_json(e.referred_ids())},
          {"step_referents", steps},
          {"is_single_object", e.is_single_object()},
          {"is_false_premise", e.is_false_premise}};
}

RefExpression expression_from_json(const json& doc) {
  RefExpression e;
  e.expression_id = field<int>(doc, "expression_id", "expression");
  const std::string at = "expression " + std::to_string(e.expression_id);
  e.scene_id = field<int>(doc, "scene_id", at);
  e.family = field<std::string>(doc, "family", at);
  auto c = parse_category(field<std::string>(doc, "category", at));
  if (!c) format_error(at + ": unknown category");
  e.category = *c;
  e.text = field<std::string>(doc, "text", at);
  try {
    e.program = parse_program(field<json>(doc, "program", at));
  } catch (const Error& err) {
    throw Error(err.code(), at + ": " + err.what());
  }
  for (const auto& s : field<json>(doc, "step_referents", at)) {
    e.trace.steps.push_back(object_set_from_json(s));
  }
  if (e.trace.size() != e.program.size()) {
    format_error(at + ": step_referents length differs from the program");
  }
  e.is_false_premise = field<bool>(doc, "is_false_premise", at);
  return e;
}

json manifest_to_json(const DatasetManifest& m) {
  json doc = document_header("manifest");
  doc["format_version"] = m.format_version;
  doc["config"] = m.config;
  doc["config_hash"] = m.config_hash;
  doc["seed"] = m.seed;
  doc["per_image"] = m.per_image;
  doc["mode"] = dataset_mode_name(m.mode);
  doc["scenes"] = json::array();
  for (const SceneGraph& s : m.scenes) doc["scenes"].push_back(scene_to_json(s));
  doc["expressions"] = json::array();
  for (const RefExpression& e : m.expressions) doc["expressions"].push_back(expression_to_json(e));
  json counts = json::object();
  for (const auto& [c, n] : m.category_counts()) counts[std::string(category_name(c))] = n;
  doc["category_counts"] = counts;
  return doc;
}

DatasetManifest manifest_from_json(const json& doc) {
  check_document(doc, "manifest");
  DatasetManifest m;
  m.format_version = field<std::string>(doc, "format_version", "manifest");
  m.config = field<json>(doc, "config", "manifest");
  m.config_hash = field<std::string>(doc, "config_hash", "manifest");
  m.seed = field<std::uint64_t>(doc, "seed", "manifest");
  m.per_image = field<int>(doc, "per_image", "manifest");
  auto mode = parse_dataset_mode(field<std::string>(doc, "mode", "manifest"));
  if (!mode) format_error("manifest: unknown mode");
  m.mode = *mode;
  for (const auto& s : field<json>(doc, "scenes", "manifest")) m.scenes.push_back(scene_from_json(s));
  for (const auto& e : field<json>(doc, "expressions", "manifest")) {
    m.expressions.push_back(expression_from_json(e));
  }
  return m;
}

std::vector<std::string> validate_manifest(const json& doc) {
  std::vector<std::string> issues;
  check_document(doc, "manifest");
  std::vector<SceneGraph> scenes;
  for (const auto& s : field<json>(doc, "scenes", "manifest")) scenes.push_back(scene_from_json(s));
  std::map<int, int> position;
  for (std::size_t i = 0; i < scenes.size(); ++i) position[scenes[i].index] = static_cast<int>(i);
  std::vector<std::optional<RenderResult>> renders(scenes.size());

  const json config = field<json>(doc, "config", "manifest");
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  if (field<std::string>(doc, "config_hash", "manifest") != hash) {
    issues.push_back("manifest: config_hash does not match the embedded config");
  }
  const int per_image = field<int>(doc, "per_image", "manifest");
  const bool false_premise = field<std::string>(doc, "mode", "manifest") == "false_premise";
  const json expressions = field<json>(doc, "expressions", "manifest");
  if (expressions.size() != scenes.size() * static_cast<std::size_t>(std::max(per_image, 0))) {
    issues.push_back("manifest: " + std::to_string(expressions.size()) + " expressions for " +
                     std::to_string(scenes.size()) + " scenes at " + std::to_string(per_image) +
                     " per image");
  }

  std::map<std::string, int> counts;
  for (const json& record : expressions) {
    const std::string at =
        "expression " + (record.contains("expression_id") ? record["expression_id"].dump()
                                                          : std::string("?"));
    try {
      RefExpression e = expression_from_json(record);
      ++counts[std::string(category_name(e.category))];
      auto it = position.find(e.scene_id);
      if (it == position.end()) {
        issues.push_back(at + ": unknown scene " + std::to_string(e.scene_id));
        continue;
      }
      auto& render = renders[it->second];
      if (!render) render = rasterize(scenes[it->second]);
      const StepTrace trace = execute(e.program, scenes[it->second], &*render);
      for (int i = 0; i < trace.size(); ++i) {
        if (trace.steps[i] != e.trace.steps[i]) {
          issues.push_back(at + ": stored referents of node " + std::to_string(i) +
                           " differ from re-execution");
        }
      }
      const ObjectSet referred = object_set_from_json(field<json>(record, "referred_ids", at));
      if (referred != trace.final_set()) {
        issues.push_back(at + ": referred_ids differ from re-execution");
      }
      if (field<bool>(record, "is_single_object", at) != (trace.final_set().size() == 1)) {
        issues.push_back(at + ": is_single_object flag is wrong");
      }
      if (e.is_false_premise != false_premise) {
        issues.push_back(at + ": is_false_premise does not match the manifest mode");
      }
      if (e.is_false_premise != trace.final_set().empty()) {
        issues.push_back(at + (e.is_false_premise ? ": false-premise expression refers to objects"
                                                  : ": expression refers to nothing"));
      }
    } catch (const Error& err) {
      issues.push_back(at + ": " + err.what());
    }
  }
  const json stored = doc.value("category_counts", json::object());
  for (Category c : kCategories) {
    const std::string name(category_name(c));
    if (stored.value(name, -1) != counts[name]) {
      issues.push_back("manifest: category_counts." + name + " is wrong");
    }
  }
  return issues;
}

std::vector<Prediction> read_predictions(std::istream& in, int width, int height) {
  std::vector<Prediction> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "predictions line " + std::to_string(number);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kPrediction, where + ": " + e.what());
    }
    Prediction p;
    if (!record.is_object() || !record.contains("expression_id") ||
        !record["expression_id"].is_number_integer()) {
      throw Error(ErrorCode::kPrediction, where + ": needs an integer expression_id");
    }
    p.expression_id = record["expression_id"].get<int>();
    const bool has_mask = record.contains("rle_mask");
    const bool has_candidate = record.contains("candidate_id");
    if (has_mask == has_candidate) {
      throw Error(ErrorCode::kPrediction,
                  where + ": exactly one of rle_mask and candidate_id is required");
    }
    try {
      if (has_mask) p.mask = decode_prediction_mask(record["rle_mask"], width, height, where);
      if (has_candidate) {
        if (!record["candidate_id"].is_number_integer()) {
          throw Error(ErrorCode::kPrediction, where + ": candidate_id must be an integer");
        }
        p.candidate_id = record["candidate_id"].get<int>();
      }
      if (record.contains("step_rle_masks")) {
        if (!record["step_rle_masks"].is_array()) {
          throw Error(ErrorCode::kPrediction, where + ": step_rle_masks must be an array");
        }
        for (const auto& m : record["step_rle_masks"]) {
          p.step_masks.push_back(decode_prediction_mask(m, width, height, where));
        }
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kPrediction) throw;
      throw Error(ErrorCode::kPrediction, where + ": " + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string prediction_to_line(const Prediction& p) {
  json j = {{"expression_id", p.expression_id}};
  if (p.mask) j["rle_mask"] = encode_rle(*p.mask);
  if (p.candidate_id) j["candidate_id"] = *p.candidate_id;
  if (!p.step_masks.empty()) {
    j["step_rle_masks"] = json::array();
    for (const Mask& m : p.step_masks) j["step_rle_masks"].push_back(encode_rle(m));
  }
  return j.dump();
}

std::string dump_document(const json& doc) { return doc.dump(1) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    format_error(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kFormat, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kFormat, "failed writing " + path.string());
}

}  // namespace refgen
