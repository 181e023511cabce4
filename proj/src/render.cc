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

#include "refgen/render.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "refgen/errors.h"

namespace refgen {
namespace {

constexpr double kEps = 1e-9;
constexpr double kNoHit = std::numeric_limits<double>::infinity();

struct Ray {
  Vec3 origin;
  Vec3 dir;  // unit length
};

class PinholeCamera {
 public:
  explicit PinholeCamera(const CameraSpec& spec)
      : eye_(spec.eye), width_(spec.width), height_(spec.height) {
    forward_ = (spec.look_at - spec.eye).normalized();
    right_ = forward_.cross(spec.up).normalized();
    up_ = right_.cross(forward_);
    focal_ = (spec.height / 2.0) / std::tan(deg_to_rad(spec.vertical_fov) / 2.0);
  }

  Ray ray(int px, int py) const {
    const double u = (px + 0.5 - width_ / 2.0) / focal_;
    const double v = (height_ / 2.0 - (py + 0.5)) / focal_;
    return Ray{eye_, (forward_ + right_ * u + up_ * v).normalized()};
  }

  // Pixel coordinates of a world point; nullopt when at or behind the eye.
  std::optional<std::pair<double, double>> project(const Vec3& p) const {
    const Vec3 d = p - eye_;
    const double depth = d.dot(forward_);
    if (depth <= kEps) return std::nullopt;
    return std::make_pair(width_ / 2.0 + focal_ * d.dot(right_) / depth,
                          height_ / 2.0 - focal_ * d.dot(up_) / depth);
  }

 private:
  Vec3 eye_;
  Vec3 forward_;
  Vec3 right_;
  Vec3 up_;
  double focal_ = 1.0;
  int width_;
  int height_;
};

double nearest_positive(double t0, double t1) {
  if (t0 > kEps) return t0;
  if (t1 > kEps) return t1;
  return kNoHit;
}

double hit_sphere(const Ray& ray, const ObjectSpec& o) {
  const Vec3 oc = ray.origin - o.position;
  const double r = o.half_extent();
  const double b = oc.dot(ray.dir);
  const double c = oc.dot(oc) - r * r;
  const double disc = b * b - c;
  if (disc < 0.0) return kNoHit;
  const double s = std::sqrt(disc);
  return nearest_positive(-b - s, -b + s);
}

// Oriented cube: slab test in the object's rotated frame.
double hit_cube(const Ray& ray, const ObjectSpec& o) {
  const double theta = deg_to_rad(o.rotation);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Vec3 p = ray.origin - o.position;
  const double lo[3] = {c * p.x + s * p.y, -s * p.x + c * p.y, p.z};
  const double ld[3] = {c * ray.dir.x + s * ray.dir.y, -s * ray.dir.x + c * ray.dir.y,
                        ray.dir.z};
  const double h = o.half_extent();
  double t_near = -kNoHit;
  double t_far = kNoHit;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(ld[axis]) < 1e-15) {
      if (lo[axis] < -h || lo[axis] > h) return kNoHit;
      continue;
    }
    double t1 = (-h - lo[axis]) / ld[axis];
    double t2 = (h - lo[axis]) / ld[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
    if (t_near > t_far) return kNoHit;
  }
  return nearest_positive(t_near, t_far);
}

// Upright cylinder: lateral surface plus the two caps.
double hit_cylinder(const Ray& ray, const ObjectSpec& o) {
  const double r = o.half_extent();
  const double z_lo = o.position.z - r;
  const double z_hi = o.position.z + r;
  const double px = ray.origin.x - o.position.x;
  const double py = ray.origin.y - o.position.y;
  const Vec3& d = ray.dir;
  double best = kNoHit;

  const double a = d.x * d.x + d.y * d.y;
  if (a > 1e-15) {
    const double b = px * d.x + py * d.y;
    const double c = px * px + py * py - r * r;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      for (double t : {(-b - s) / a, (-b + s) / a}) {
        if (t <= kEps) continue;
        const double z = ray.origin.z + t * d.z;
        if (z >= z_lo && z <= z_hi) best = std::min(best, t);
      }
    }
  }
  if (std::abs(d.z) > 1e-15) {
    for (double zc : {z_lo, z_hi}) {
      const double t = (zc - ray.origin.z) / d.z;
      if (t <= kEps) continue;
      const double x = px + t * d.x;
      const double y = py + t * d.y;
      if (x * x + y * y <= r * r) best = std::min(best, t);
    }
  }
  return best;
}

double hit(const Ray& ray, const ObjectSpec& o) {
  switch (o.shape()) {
    case Shape::kSphere: return hit_sphere(ray, o);
    case Shape::kCube: return hit_cube(ray, o);
    case Shape::kCylinder: return hit_cylinder(ray, o);
  }
  return kNoHit;
}

struct PixelRect {
  int x0, y0, x1, y1;  // inclusive; empty when x0 > x1 or y0 > y1
};

// Conservative screen rectangle from the object's world-space bounding box.
PixelRect screen_rect(const PinholeCamera& camera, const ObjectSpec& o, int width,
                      int height) {
  const double r = o.base_radius;
  const double top = o.position.z + o.half_extent();
  const double bottom = o.position.z - o.half_extent();
  double min_x = kNoHit, min_y = kNoHit, max_x = -kNoHit, max_y = -kNoHit;
  for (double dx : {-r, r}) {
    for (double dy : {-r, r}) {
      for (double z : {bottom, top}) {
        auto p = camera.project(Vec3{o.position.x + dx, o.position.y + dy, z});
        if (!p) return PixelRect{0, 0, width - 1, height - 1};
        min_x = std::min(min_x, p->first);
        max_x = std::max(max_x, p->first);
        min_y = std::min(min_y, p->second);
        max_y = std::max(max_y, p->second);
      }
    }
  }
  PixelRect rect{static_cast<int>(std::floor(min_x)) - 1,
                 static_cast<int>(std::floor(min_y)) - 1,
                 static_cast<int>(std::ceil(max_x)) + 1,
                 static_cast<int>(std::ceil(max_y)) + 1};
  rect.x0 = std::max(rect.x0, 0);
  rect.y0 = std::max(rect.y0, 0);
  rect.x1 = std::min(rect.x1, width - 1);
  rect.y1 = std::min(rect.y1, height - 1);
  return rect;
}

}  // namespace

Mask RenderResult::visible_union(const ObjectSet& ids) const {
  Mask out(width, height);
  for (int id : ids) {
    if (id < 0 || id >= static_cast<int>(objects.size())) {
      throw Error(ErrorCode::kInvalidReference, "object id " + std::to_string(id));
    }
    out |= objects[id].visible_mask;
  }
  return out;
}

RenderResult rasterize(const SceneGraph& scene) {
  scene.camera.validate();
  const int width = scene.camera.width;
  const int height = scene.camera.height;
  const PinholeCamera camera(scene.camera);

  RenderResult result;
  result.width = width;
  result.height = height;
  result.depth_ids.assign(static_cast<std::size_t>(width) * height, -1);
  std::vector<double> depth(result.depth_ids.size(), kNoHit);

  result.objects.resize(scene.objects.size());
  for (const ObjectSpec& o : scene.objects) {
    ObjectRender& out = result.objects[o.id];
    out.full_mask = Mask(width, height);
    out.camera_distance = (o.position - scene.camera.eye).norm();
    const PixelRect rect = screen_rect(camera, o, width, height);
    for (int y = rect.y0; y <= rect.y1; ++y) {
      for (int x = rect.x0; x <= rect.x1; ++x) {
        const double t = hit(camera.ray(x, y), o);
        if (t == kNoHit) continue;
        out.full_mask.set(x, y);
        const std::size_t p = static_cast<std::size_t>(y) * width + x;
        if (t < depth[p]) {
          depth[p] = t;
          result.depth_ids[p] = static_cast<std::int16_t>(o.id);
        }
      }
    }
  }

  for (ObjectRender& out : result.objects) out.visible_mask = Mask(width, height);
  for (std::size_t p = 0; p < result.depth_ids.size(); ++p) {
    const int id = result.depth_ids[p];
    if (id >= 0) result.objects[id].visible_mask.set_index(static_cast<std::int64_t>(p));
  }

  for (ObjectRender& out : result.objects) {
    if (out.full_mask.empty()) {
      out.off_screen = true;
      continue;
    }
    BoundingBox box{width, height, -1, -1};
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!out.full_mask.get(x, y)) continue;
        box.x0 = std::min(box.x0, x);
        box.y0 = std::min(box.y0, y);
        box.x1 = std::max(box.x1, x);
        box.y1 = std::max(box.y1, y);
      }
    }
    out.bbox = box;
  }
  for (std::size_t id = 0; id < result.objects.size(); ++id) {
    ObjectRender& out = result.objects[id];
    if (out.off_screen) continue;
    out.occlusion_ratio = occlusion_ratio(result, static_cast<int>(id));
    out.visibility = classify_visibility(out.occlusion_ratio);
  }
  return result;
}

double occlusion_ratio(const RenderResult& render, int id) {
  if (id < 0 || id >= static_cast<int>(render.objects.size())) {
    throw Error(ErrorCode::kInvalidReference, "object id " + std::to_string(id));
  }
  const ObjectRender& self = render.objects[id];
  if (self.off_screen || !self.bbox) {
    throw Error(ErrorCode::kUndefinedRatio,
                "object " + std::to_string(id) + " is off-screen");
  }
  const BoundingBox& box = *self.bbox;
  std::int64_t covered = 0;
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      const int owner = render.depth_ids[static_cast<std::size_t>(y) * render.width + x];
      if (owner < 0 || owner == id) continue;
      if (render.objects[owner].camera_distance < self.camera_distance) ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(box.area());
}

Visibility classify_visibility(double ratio) {
  if (ratio == 0.0) return Visibility::kFullyVisible;
  if (ratio > kPartialVisibilityThreshold) return Visibility::kPartiallyVisible;
  return Visibility::kAmbiguous;
}

}  // namespace refgen
