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

// Scenes, datasets and predictors shared by the unit and acceptance tests.

#ifndef REFGEN_TESTS_SUPPORT_FIXTURES_H_
#define REFGEN_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "refgen/eval.h"
#include "refgen/generator.h"
#include "refgen/rng.h"
#include "refgen/scene.h"
#include "refgen/templates.h"

namespace refgen::testing {

// Camera on the -y axis at height `height` looking along +y, so that right is
// +x and behind is +y.
CameraSpec axial_camera(double height = 0.5, double vertical_fov = 20.0, int size = 320);

Attributes attrs(Size size, Color color, Material material, Shape shape);

// A scene from (attributes, x, y) triples.
struct Placement {
  Attributes attributes;
  double x = 0.0;
  double y = 0.0;
};
SceneGraph scene_of(const std::vector<Placement>& placements,
                    const CameraSpec& camera = CameraSpec{});

// `n` scenes from the default configuration.
std::vector<SceneGraph> default_scenes(int n, std::uint64_t seed);

// Program and scene pairs cycling through every family of the default catalog.
// Every third program has one value input perturbed at random, which may make
// it fail or refer to nothing.
struct ProgramCase {
  SceneGraph scene;
  RenderResult render;
  Program program;
  Category category = Category::kZeroRelate;
};
std::vector<ProgramCase> program_cases(int n, std::uint64_t seed);

// Masks for every expression of a manifest.
std::vector<Prediction> oracle_predictions(const GroundTruth& truth);
std::vector<Prediction> empty_predictions(const GroundTruth& truth);
// Ground truth at every node, complemented at `unique` nodes only.
std::vector<Prediction> unique_corrupting_step_predictions(const GroundTruth& truth);

}  // namespace refgen::testing

#endif  // REFGEN_TESTS_SUPPORT_FIXTURES_H_
