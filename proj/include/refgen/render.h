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

// Z-buffer rasterization of scenes: one analytic ray per pixel center,
// nearest hit wins. Produces the per-object masks that serve as segmentation
// ground truth and the occlusion ratios behind the `visible` module.

#ifndef REFGEN_RENDER_H_
#define REFGEN_RENDER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "refgen/mask.h"
#include "refgen/object_set.h"
#include "refgen/scene.h"

namespace refgen {

// Inclusive pixel rectangle.
struct BoundingBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  std::int64_t area() const {
    return static_cast<std::int64_t>(x1 - x0 + 1) * (y1 - y0 + 1);
  }
  bool operator==(const BoundingBox&) const = default;
};

struct ObjectRender {
  Mask full_mask;     // silhouette ignoring every other object
  Mask visible_mask;  // pixels this object owns in the depth buffer
  std::optional<BoundingBox> bbox;  // tight box around full_mask
  bool off_screen = false;
  double occlusion_ratio = 0.0;  // meaningless when off_screen
  std::optional<Visibility> visibility;  // empty when off_screen
  double camera_distance = 0.0;  // eye to object center
};

struct RenderResult {
  int width = 0;
  int height = 0;
  std::vector<ObjectRender> objects;
  // Id of the nearest object per pixel (row-major); -1 where nothing is hit.
  std::vector<std::int16_t> depth_ids;

  // Union of visible masks of `ids`: the segmentation ground truth of a set.
  Mask visible_union(const ObjectSet& ids) const;
};

RenderResult rasterize(const SceneGraph& scene);

// Fraction of `id`'s bounding box covered by visible masks of objects whose
// centers are strictly nearer the camera. Throws Error(kUndefinedRatio) for
// off-screen objects and Error(kInvalidReference) for unknown ids.
double occlusion_ratio(const RenderResult& render, int id);

// 0 -> fully visible; > 0.2 -> partially visible; otherwise ambiguous.
Visibility classify_visibility(double ratio);

inline constexpr double kPartialVisibilityThreshold = 0.2;

}  // namespace refgen

#endif  // REFGEN_RENDER_H_
