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

#include "refgen/scene.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "refgen/errors.h"
#include "refgen/rng.h"

namespace refgen {

void CameraSpec::validate() const {
  if ((eye - look_at).norm() < 1e-9) {
    throw Error(ErrorCode::kConfig, "camera eye coincides with look_at");
  }
  if (!(vertical_fov > 0.0 && vertical_fov < 180.0)) {
    throw Error(ErrorCode::kConfig, "camera vertical_fov must lie in (0, 180)");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kConfig, "camera image size must be positive");
  }
  const Vec3 forward = (look_at - eye).normalized();
  if (forward.cross(up).norm() < 1e-9) {
    throw Error(ErrorCode::kConfig, "camera up vector is parallel to the view axis");
  }
  Vec3 flat{forward.x, forward.y, 0.0};
  if (flat.norm() < 1e-9) {
    throw Error(ErrorCode::kConfig,
                "camera looks straight down; ground-plane directions are undefined");
  }
}

const Vec3& DirectionSet::operator[](Direction d) const {
  switch (d) {
    case Direction::kLeft: return left;
    case Direction::kRight: return right;
    case Direction::kFront: return front;
    case Direction::kBehind: return behind;
  }
  return left;
}

DirectionSet directions_from_camera(const CameraSpec& camera) {
  const Vec3 forward = camera.look_at - camera.eye;
  const Vec3 behind = Vec3{forward.x, forward.y, 0.0}.normalized();
  const Vec3 right = behind.cross(Vec3{0.0, 0.0, 1.0}).normalized();
  return DirectionSet{-right, right, -behind, behind};
}

double ObjectSpec::half_extent() const {
  return attributes.shape == Shape::kCube ? base_radius / std::sqrt(2.0)
                                          : base_radius;
}

std::string_view split_condition_name(SplitCondition c) {
  switch (c) {
    case SplitCondition::kNone: return "none";
    case SplitCondition::kA: return "A";
    case SplitCondition::kB: return "B";
  }
  return "none";
}

std::optional<SplitCondition> parse_split_condition(std::string_view name) {
  if (name == "none") return SplitCondition::kNone;
  if (name == "A") return SplitCondition::kA;
  if (name == "B") return SplitCondition::kB;
  return std::nullopt;
}

bool ConditionTable::permits(Shape s, Color c) const {
  const auto& colors = allowed(s);
  return colors.empty() || std::find(colors.begin(), colors.end(), c) != colors.end();
}

ConditionTable default_condition_a() {
  ConditionTable t;
  t.allowed_colors[static_cast<int>(Shape::kCube)] = {Color::kGray, Color::kBlue,
                                                      Color::kBrown, Color::kYellow};
  t.allowed_colors[static_cast<int>(Shape::kCylinder)] = {
      Color::kRed, Color::kGreen, Color::kPurple, Color::kCyan};
  return t;
}

ConditionTable default_condition_b() {
  ConditionTable a = default_condition_a();
  ConditionTable b;
  b.allowed_colors[static_cast<int>(Shape::kCube)] =
      a.allowed(Shape::kCylinder);
  b.allowed_colors[static_cast<int>(Shape::kCylinder)] = a.allowed(Shape::kCube);
  return b;
}

void SceneConfig::validate() const {
  if (min_objects < 1 || max_objects < min_objects ||
      max_objects > ObjectSet::kMaxObjects) {
    throw Error(ErrorCode::kConfig, "object count range must satisfy 1 <= min <= max <= " +
                                        std::to_string(ObjectSet::kMaxObjects));
  }
  if (!(plane_extent > 0.0)) throw Error(ErrorCode::kConfig, "plane_extent must be > 0");
  if (!(min_distance >= 0.0)) throw Error(ErrorCode::kConfig, "min_distance must be >= 0");
  if (!(relation_margin >= 0.0)) {
    throw Error(ErrorCode::kConfig, "relation_margin must be >= 0");
  }
  if (max_placement_attempts < 1) {
    throw Error(ErrorCode::kConfig, "max_placement_attempts must be >= 1");
  }
  if (!(large_radius > 0.0 && small_radius > 0.0)) {
    throw Error(ErrorCode::kConfig, "object radii must be > 0");
  }
  for (const ConditionTable* t : {&condition_a, &condition_b}) {
    for (int s = 0; s < 3; ++s) {
      for (Color c : t->allowed_colors[s]) {
        if (static_cast<int>(c) < 0 || static_cast<int>(c) >= value_count(AttributeKind::kColor)) {
          throw Error(ErrorCode::kConfig, "condition table names an unknown color");
        }
      }
    }
  }
  camera.validate();
}

const ConditionTable* SceneConfig::active_condition() const {
  switch (split) {
    case SplitCondition::kA: return &condition_a;
    case SplitCondition::kB: return &condition_b;
    case SplitCondition::kNone: return nullptr;
  }
  return nullptr;
}

const ObjectSpec& SceneGraph::object(int id) const {
  if (!has_object(id)) {
    throw Error(ErrorCode::kInvalidReference,
                "object id " + std::to_string(id) + " not in scene of " +
                    std::to_string(size()) + " objects");
  }
  return objects[id];
}

ObjectSpec make_object(Attributes attributes, double x, double y, double rotation,
                       double large_radius, double small_radius) {
  ObjectSpec o;
  o.attributes = attributes;
  o.base_radius = attributes.size == Size::kLarge ? large_radius : small_radius;
  o.rotation = rotation;
  o.position = Vec3{x, y, o.half_extent()};
  return o;
}

SceneGraph make_scene(std::vector<ObjectSpec> objects, const CameraSpec& camera,
                      double relation_margin) {
  if (static_cast<int>(objects.size()) > ObjectSet::kMaxObjects) {
    throw Error(ErrorCode::kConfig, "too many objects in scene");
  }
  camera.validate();
  SceneGraph scene;
  for (std::size_t i = 0; i < objects.size(); ++i) objects[i].id = static_cast<int>(i);
  scene.objects = std::move(objects);
  scene.camera = camera;
  scene.directions = directions_from_camera(camera);
  scene.relation_margin = relation_margin;
  return scene;
}

SceneGraph sample_scene(std::uint64_t seed, const SceneConfig& config) {
  config.validate();
  Rng rng(seed);
  SceneGraph scene;
  scene.seed = seed;
  scene.camera = config.camera;
  scene.directions = directions_from_camera(config.camera);
  scene.split = config.split;
  scene.relation_margin = config.relation_margin;

  const ConditionTable* condition = config.active_condition();
  const int count = rng.uniform_int(config.min_objects, config.max_objects);
  scene.objects.reserve(count);

  for (int id = 0; id < count; ++id) {
    Attributes attrs;
    attrs.shape = static_cast<Shape>(rng.uniform_int(0, value_count(AttributeKind::kShape) - 1));
    attrs.size = static_cast<Size>(rng.uniform_int(0, value_count(AttributeKind::kSize) - 1));
    attrs.material =
        static_cast<Material>(rng.uniform_int(0, value_count(AttributeKind::kMaterial) - 1));
    if (condition != nullptr && !condition->allowed(attrs.shape).empty()) {
      attrs.color = rng.pick(condition->allowed(attrs.shape));
    } else {
      attrs.color =
          static_cast<Color>(rng.uniform_int(0, value_count(AttributeKind::kColor) - 1));
    }
    const double rotation = rng.uniform(0.0, 360.0);
    const double radius = config.radius_for(attrs.size);

    int distance_rejections = 0;
    int overlap_rejections = 0;
    bool placed = false;
    for (int attempt = 0; attempt < config.max_placement_attempts && !placed; ++attempt) {
      const double x = rng.uniform(-config.plane_extent, config.plane_extent);
      const double y = rng.uniform(-config.plane_extent, config.plane_extent);
      bool ok = true;
      for (const ObjectSpec& other : scene.objects) {
        const double dx = other.position.x - x;
        const double dy = other.position.y - y;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d < config.min_distance) {
          ++distance_rejections;
          ok = false;
          break;
        }
        if (d < radius + other.base_radius) {
          ++overlap_rejections;
          ok = false;
          break;
        }
      }
      if (ok) {
        ObjectSpec o = make_object(attrs, x, y, rotation, config.large_radius,
                                   config.small_radius);
        o.id = id;
        scene.objects.push_back(o);
        placed = true;
      }
    }
    if (!placed) {
      const char* constraint = distance_rejections >= overlap_rejections
                                   ? "min_distance"
                                   : "footprint_overlap";
      throw Error(ErrorCode::kSamplingExhausted,
                  "could not place object " + std::to_string(id) + " of " +
                      std::to_string(count) + " after " +
                      std::to_string(config.max_placement_attempts) +
                      " attempts; blocking constraint: " + constraint);
    }
  }
  return scene;
}

std::vector<SceneGraph> sample_scenes(int n, std::uint64_t seed, const SceneConfig& config) {
  if (n < 0) throw Error(ErrorCode::kConfig, "scene count must be >= 0");
  std::vector<SceneGraph> scenes;
  scenes.reserve(n);
  for (int i = 0; i < n; ++i) {
    scenes.push_back(sample_scene(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)), config));
    scenes.back().index = i;
  }
  return scenes;
}

ObjectSet spatial_related(const SceneGraph& scene, int anchor, Direction direction) {
  const ObjectSpec& a = scene.object(anchor);
  const Vec3& dir = scene.directions[direction];
  ObjectSet out;
  for (const ObjectSpec& o : scene.objects) {
    if (o.id == anchor) continue;
    if ((o.position - a.position).dot(dir) > scene.relation_margin) out.insert(o.id);
  }
  return out;
}

std::vector<int> order_along(const SceneGraph& scene, const ObjectSet& ids,
                             Direction direction) {
  // "From left" means walking rightwards, so sort along the opposite vector.
  const Vec3& axis = scene.directions[opposite(direction)];
  std::vector<int> out;
  for (int id : ids) {
    scene.object(id);
    out.push_back(id);
  }
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    return scene.objects[a].position.dot(axis) < scene.objects[b].position.dot(axis);
  });
  return out;
}

}  // namespace refgen
