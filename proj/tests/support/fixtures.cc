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

#include "support/fixtures.h"

#include <string>

#include "refgen/errors.h"
#include "refgen/executor.h"
#include "refgen/render.h"

namespace refgen::testing {

CameraSpec axial_camera(double height, double vertical_fov, int size) {
  CameraSpec c;
  c.eye = Vec3{0.0, -10.0, height};
  c.look_at = Vec3{0.0, 0.0, height};
  c.up = Vec3{0.0, 0.0, 1.0};
  c.vertical_fov = vertical_fov;
  c.width = size;
  c.height = size;
  return c;
}

Attributes attrs(Size size, Color color, Material material, Shape shape) {
  Attributes a;
  a.size = size;
  a.color = color;
  a.material = material;
  a.shape = shape;
  return a;
}

SceneGraph scene_of(const std::vector<Placement>& placements, const CameraSpec& camera) {
  std::vector<ObjectSpec> objects;
  for (const Placement& p : placements) {
    objects.push_back(make_object(p.attributes, p.x, p.y));
    objects.back().id = static_cast<int>(objects.size()) - 1;
  }
  return make_scene(std::move(objects), camera);
}

std::vector<SceneGraph> default_scenes(int n, std::uint64_t seed) {
  return sample_scenes(n, seed, SceneConfig{});
}

namespace {

void perturb(std::vector<ProgramNode>& nodes, Rng& rng) {
  std::vector<int> candidates;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (!nodes[i].value_inputs.empty()) candidates.push_back(i);
  }
  if (candidates.empty()) return;
  ProgramNode& node = nodes[rng.pick(candidates)];
  if (auto kind = filter_kind(node.function)) {
    node.value_inputs[0] = std::string(canonical_name(*kind, rng.uniform_int(0, value_count(*kind) - 1)));
  } else if (node.function == Function::kRelate) {
    node.value_inputs[0] = std::string(direction_name(rng.pick(std::span<const Direction>(kDirections))));
  } else if (node.function == Function::kOrdinal) {
    node.value_inputs[0] = std::to_string(rng.uniform_int(1, 6));
    node.value_inputs[1] = std::string(direction_name(rng.pick(std::span<const Direction>(kDirections))));
  } else if (node.function == Function::kVisible) {
    node.value_inputs[0] = rng.bernoulli(0.5) ? "fully_visible" : "partially_visible";
  }
}

}  // namespace

std::vector<ProgramCase> program_cases(int n, std::uint64_t seed) {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  GenerationOptions options;
  options.decoration_probability = 0.3;
  Rng rng(seed);
  std::vector<ProgramCase> cases;
  const int scene_count = (n + 9) / 10;
  const std::vector<SceneGraph> scenes = default_scenes(scene_count, seed);
  std::size_t family = 0;
  for (int s = 0; s < scene_count && static_cast<int>(cases.size()) < n; ++s) {
    const RenderResult render = rasterize(scenes[s]);
    for (int j = 0; j < 10 && static_cast<int>(cases.size()) < n; ++j) {
      // Families a scene cannot support are skipped in favour of the next.
      for (std::size_t tries = 0; tries < catalog.families().size(); ++tries) {
        const TemplateFamily& f = catalog.families()[family++ % catalog.families().size()];
        try {
          RefExpression e = sample_from_family(scenes[s], render, f, options, rng);
          std::vector<ProgramNode> nodes = e.program.nodes();
          if (cases.size() % 3 == 2) perturb(nodes, rng);
          cases.push_back({scenes[s], render, Program::from_nodes(std::move(nodes)), f.category});
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kGenerationExhausted) throw;
        }
      }
    }
  }
  return cases;
}

std::vector<Prediction> oracle_predictions(const GroundTruth& truth) {
  std::vector<Prediction> out;
  for (const RefExpression& e : truth.manifest().expressions) {
    Prediction p;
    p.expression_id = e.expression_id;
    p.mask = truth.final_mask(e);
    if (e.is_single_object()) p.candidate_id = e.referred_ids().first();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> empty_predictions(const GroundTruth& truth) {
  std::vector<Prediction> out;
  for (const RefExpression& e : truth.manifest().expressions) {
    const RenderResult& r = truth.render_of(e);
    Prediction p;
    p.expression_id = e.expression_id;
    p.mask = Mask(r.width, r.height);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> unique_corrupting_step_predictions(const GroundTruth& truth) {
  std::vector<Prediction> out;
  for (const RefExpression& e : truth.manifest().expressions) {
    Prediction p;
    p.expression_id = e.expression_id;
    for (int i = 0; i < e.program.size(); ++i) {
      Mask m = truth.step_mask(e, i);
      if (e.program.node(i).function == Function::kUnique) m = m.complement();
      p.step_masks.push_back(std::move(m));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace refgen::testing
