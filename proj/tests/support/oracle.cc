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

#include "support/oracle.h"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace refgen::testing {
namespace {

using nlohmann::json;

const std::map<std::string, std::vector<std::string>>& value_tables() {
  static const auto* tables = new std::map<std::string, std::vector<std::string>>{
      {"color", {"gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"}},
      {"size", {"large", "small"}},
      {"shape", {"cube", "sphere", "cylinder"}},
      {"material", {"metal", "rubber"}},
  };
  return *tables;
}

std::string value_of(const ObjectSpec& o, const std::string& kind) {
  const auto& table = value_tables().at(kind);
  if (kind == "color") return table[static_cast<int>(o.attributes.color)];
  if (kind == "size") return table[static_cast<int>(o.attributes.size)];
  if (kind == "shape") return table[static_cast<int>(o.attributes.shape)];
  return table[static_cast<int>(o.attributes.material)];
}

Vec3 direction_vector(const SceneGraph& scene, const std::string& name) {
  if (name == "left") return scene.directions.left;
  if (name == "right") return scene.directions.right;
  if (name == "front") return scene.directions.front;
  if (name == "behind") return scene.directions.behind;
  throw std::invalid_argument("direction " + name);
}

bool known_direction(const std::string& name) {
  return name == "left" || name == "right" || name == "front" || name == "behind";
}

struct Failed {};

IdSet eval(const json& program, int node, const SceneGraph& scene, const RenderResult* render) {
  const json& n = program.at(node);
  const std::string f = n.at("function");
  std::vector<std::string> values;
  for (const auto& v : n.value("value_inputs", json::array())) values.push_back(v);
  std::vector<IdSet> in;
  for (const auto& i : n.value("inputs", json::array())) {
    in.push_back(eval(program, i.get<int>(), scene, render));
  }

  if (f == "scene") {
    IdSet all;
    for (const ObjectSpec& o : scene.objects) all.insert(o.id);
    return all;
  }
  if (f.rfind("filter_", 0) == 0) {
    const std::string kind = f.substr(7);
    const auto& table = value_tables().at(kind);
    if (std::find(table.begin(), table.end(), values.at(0)) == table.end()) throw Failed{};
    IdSet out;
    for (int id : in.at(0)) {
      if (value_of(scene.objects.at(id), kind) == values[0]) out.insert(id);
    }
    return out;
  }
  if (f.rfind("same_", 0) == 0) {
    if (in.at(0).size() != 1) throw Failed{};
    const int anchor = *in[0].begin();
    const std::string kind = f.substr(5);
    IdSet out;
    for (const ObjectSpec& o : scene.objects) {
      if (o.id != anchor && value_of(o, kind) == value_of(scene.objects.at(anchor), kind)) {
        out.insert(o.id);
      }
    }
    return out;
  }
  if (f == "unique") {
    if (in.at(0).size() != 1) throw Failed{};
    return in[0];
  }
  if (f == "relate") {
    if (in.at(0).size() != 1 || !known_direction(values.at(0))) throw Failed{};
    return oracle_related(scene, *in[0].begin(), values[0]);
  }
  if (f == "and" || f == "or") {
    IdSet out;
    if (f == "and") {
      std::set_intersection(in.at(0).begin(), in[0].end(), in.at(1).begin(), in[1].end(),
                            std::inserter(out, out.begin()));
    } else {
      std::set_union(in.at(0).begin(), in[0].end(), in.at(1).begin(), in[1].end(),
                     std::inserter(out, out.begin()));
    }
    return out;
  }
  if (f == "ordinal") {
    const std::string& rank_text = values.at(0);
    if (rank_text.empty() ||
        !std::all_of(rank_text.begin(), rank_text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Failed{};
    }
    const int rank = std::stoi(rank_text);
    if (rank < 1 || rank > static_cast<int>(in.at(0).size()) || !known_direction(values.at(1))) {
      throw Failed{};
    }
    return IdSet{oracle_order(scene, in[0], values[1]).at(rank - 1)};
  }
  if (f == "visible") {
    Visibility flag;
    if (values.at(0) == "fully_visible") {
      flag = Visibility::kFullyVisible;
    } else if (values[0] == "partially_visible") {
      flag = Visibility::kPartiallyVisible;
    } else {
      throw Failed{};
    }
    if (render == nullptr) throw Failed{};
    IdSet out;
    for (int id : in.at(0)) {
      const auto& v = render->objects.at(id).visibility;
      if (!v) throw Failed{};
      if (*v == flag) out.insert(id);
    }
    return out;
  }
  throw Failed{};
}

}  // namespace

IdSet oracle_related(const SceneGraph& scene, int anchor, const std::string& direction) {
  const Vec3 d = direction_vector(scene, direction);
  const Vec3& a = scene.objects.at(anchor).position;
  IdSet out;
  for (const ObjectSpec& o : scene.objects) {
    if (o.id == anchor) continue;
    const double along = (o.position.x - a.x) * d.x + (o.position.y - a.y) * d.y +
                         (o.position.z - a.z) * d.z;
    if (along > scene.relation_margin) out.insert(o.id);
  }
  return out;
}

std::vector<int> oracle_order(const SceneGraph& scene, const IdSet& ids,
                              const std::string& direction) {
  // The object furthest towards `direction` comes first.
  const Vec3 d = direction_vector(scene, direction);
  std::vector<std::pair<double, int>> keyed;
  for (int id : ids) {
    const Vec3& p = scene.objects.at(id).position;
    keyed.emplace_back(-(p.x * d.x + p.y * d.y + p.z * d.z), id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (const auto& [key, id] : keyed) out.push_back(id);
  return out;
}

std::optional<IdSet> oracle_eval(const json& program, int node, const SceneGraph& scene,
                                 const RenderResult* render) {
  try {
    return eval(program, node, scene, render);
  } catch (const Failed&) {
    return std::nullopt;
  }
}

std::vector<std::optional<IdSet>> oracle_trace(const json& program, const SceneGraph& scene,
                                               const RenderResult* render) {
  std::vector<std::optional<IdSet>> out;
  bool failed = false;
  for (int i = 0; i < static_cast<int>(program.size()); ++i) {
    if (!failed) {
      out.push_back(oracle_eval(program, i, scene, render));
      failed = !out.back();
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace refgen::testing
