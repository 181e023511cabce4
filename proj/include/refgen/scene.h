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

// Block-world scenes: objects on a ground plane seen by a pinhole camera, the
// four canonical directions derived from that camera, and the spatial
// relations programs are evaluated against.

#ifndef REFGEN_SCENE_H_
#define REFGEN_SCENE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "refgen/geometry.h"
#include "refgen/object_set.h"
#include "refgen/vocab.h"

namespace refgen {

struct CameraSpec {
  Vec3 eye{9.0, -8.0, 7.5};
  Vec3 look_at{0.0, 0.0, 0.0};
  Vec3 up{0.0, 0.0, 1.0};
  double vertical_fov = 45.0;  // degrees
  int width = 320;
  int height = 320;

  // Throws Error(kConfig) when the camera is degenerate.
  void validate() const;
  bool operator==(const CameraSpec&) const = default;
};

// Unit ground-plane vectors; left = -right and front = -behind.
struct DirectionSet {
  Vec3 left;
  Vec3 right;
  Vec3 front;
  Vec3 behind;

  const Vec3& operator[](Direction d) const;
  bool operator==(const DirectionSet&) const = default;
};

// "right" is the camera's right axis and "behind" its viewing direction, both
// projected onto the ground plane.
DirectionSet directions_from_camera(const CameraSpec& camera);

struct ObjectSpec {
  int id = 0;
  Attributes attributes;
  // Center of the object; z is its vertical half-extent so it rests on z = 0.
  Vec3 position;
  double rotation = 0.0;  // degrees about the vertical axis
  // Radius of the circle circumscribing the object's footprint.
  double base_radius = 0.0;

  Shape shape() const { return attributes.shape; }
  // Half side for cubes, radius for spheres and cylinders.
  double half_extent() const;
  bool operator==(const ObjectSpec&) const = default;
};

enum class SplitCondition { kNone, kA, kB };
std::string_view split_condition_name(SplitCondition c);
std::optional<SplitCondition> parse_split_condition(std::string_view name);

// Allowed colors per shape; an empty list leaves the shape unconstrained.
struct ConditionTable {
  std::array<std::vector<Color>, 3> allowed_colors;

  const std::vector<Color>& allowed(Shape s) const {
    return allowed_colors[static_cast<int>(s)];
  }
  bool permits(Shape s, Color c) const;
  bool operator==(const ConditionTable&) const = default;
};

// Condition A: cubes gray/blue/brown/yellow, cylinders red/green/purple/cyan.
ConditionTable default_condition_a();
// Condition B swaps the cube and cylinder color sets of A.
ConditionTable default_condition_b();

struct SceneConfig {
  int min_objects = 3;
  int max_objects = 10;
  double plane_extent = 3.0;      // centers lie in [-extent, extent]^2
  double min_distance = 0.8;      // center-to-center
  double relation_margin = 0.15;  // along each direction
  int max_placement_attempts = 50;
  double large_radius = 0.7;
  double small_radius = 0.35;
  SplitCondition split = SplitCondition::kNone;
  ConditionTable condition_a = default_condition_a();
  ConditionTable condition_b = default_condition_b();
  CameraSpec camera;

  void validate() const;
  const ConditionTable* active_condition() const;
  double radius_for(Size s) const {
    return s == Size::kLarge ? large_radius : small_radius;
  }
  bool operator==(const SceneConfig&) const = default;
};

struct SceneGraph {
  int index = 0;  // position within its dataset; the scene id
  std::uint64_t seed = 0;
  std::vector<ObjectSpec> objects;
  DirectionSet directions;
  CameraSpec camera;
  SplitCondition split = SplitCondition::kNone;
  double relation_margin = 0.15;

  int size() const { return static_cast<int>(objects.size()); }
  ObjectSet all_ids() const { return ObjectSet::all(size()); }
  bool has_object(int id) const { return id >= 0 && id < size(); }
  const ObjectSpec& object(int id) const;
  bool operator==(const SceneGraph&) const = default;
};

// Samples a scene. Pure function of (seed, config). Throws
// Error(kSamplingExhausted) naming the constraint that blocked placement.
SceneGraph sample_scene(std::uint64_t seed, const SceneConfig& config);
// Scenes 0..n-1, scene i drawn from stream i of `seed`.
std::vector<SceneGraph> sample_scenes(int n, std::uint64_t seed, const SceneConfig& config);

// Builds a scene from explicit objects; ids are reassigned to list order and
// radii/heights derived from size and shape. Used for hand-made fixtures.
SceneGraph make_scene(std::vector<ObjectSpec> objects, const CameraSpec& camera,
                      double relation_margin = 0.15);
ObjectSpec make_object(Attributes attributes, double x, double y,
                       double rotation = 0.0, double large_radius = 0.7,
                       double small_radius = 0.35);

// Objects whose displacement from `anchor` projects onto `direction` by more
// than the scene's relation margin. Throws Error(kInvalidReference).
ObjectSet spatial_related(const SceneGraph& scene, int anchor, Direction direction);

// Orders `ids` "from `direction`": from-left is leftmost first, i.e. ascending
// along the right vector. Ties go to the smaller id.
std::vector<int> order_along(const SceneGraph& scene, const ObjectSet& ids,
                             Direction direction);

}  // namespace refgen

#endif  // REFGEN_SCENE_H_
