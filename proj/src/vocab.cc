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

#include "refgen/vocab.h"

#include <cassert>
#include <vector>

namespace refgen {
namespace {

using Forms = std::vector<std::string_view>;

// Indexed [kind][value]; first entry is canonical.
const std::array<std::vector<Forms>, 4>& table() {
  static const std::array<std::vector<Forms>, 4> kTable = {{
      // size
      {{"large", "big"}, {"small", "tiny"}},
      // color
      {{"gray"}, {"red"}, {"blue"}, {"green"}, {"brown"}, {"purple"},
       {"cyan"}, {"yellow"}},
      // material
      {{"metal", "shiny", "metallic"}, {"rubber", "matte"}},
      // shape
      {{"cube", "block"}, {"sphere", "ball"}, {"cylinder"}},
  }};
  return kTable;
}

const std::vector<Forms>& kind_table(AttributeKind kind) {
  return table()[static_cast<int>(kind)];
}

}  // namespace

int Attributes::get(AttributeKind kind) const {
  switch (kind) {
    case AttributeKind::kSize: return static_cast<int>(size);
    case AttributeKind::kColor: return static_cast<int>(color);
    case AttributeKind::kMaterial: return static_cast<int>(material);
    case AttributeKind::kShape: return static_cast<int>(shape);
  }
  return -1;
}

void Attributes::set(AttributeKind kind, int value) {
  assert(value >= 0 && value < value_count(kind));
  switch (kind) {
    case AttributeKind::kSize: size = static_cast<Size>(value); break;
    case AttributeKind::kColor: color = static_cast<Color>(value); break;
    case AttributeKind::kMaterial: material = static_cast<Material>(value); break;
    case AttributeKind::kShape: shape = static_cast<Shape>(value); break;
  }
}

int value_count(AttributeKind kind) {
  return static_cast<int>(kind_table(kind).size());
}

std::string_view attribute_kind_name(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kSize: return "size";
    case AttributeKind::kColor: return "color";
    case AttributeKind::kMaterial: return "material";
    case AttributeKind::kShape: return "shape";
  }
  return "";
}

std::optional<AttributeKind> parse_attribute_kind(std::string_view name) {
  for (AttributeKind k : kAttributeKinds) {
    if (attribute_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view canonical_name(AttributeKind kind, int value) {
  const auto& t = kind_table(kind);
  assert(value >= 0 && value < static_cast<int>(t.size()));
  return t[value].front();
}

std::optional<int> parse_canonical(AttributeKind kind, std::string_view name) {
  const auto& t = kind_table(kind);
  for (int v = 0; v < static_cast<int>(t.size()); ++v) {
    if (t[v].front() == name) return v;
  }
  return std::nullopt;
}

std::span<const std::string_view> synonyms(AttributeKind kind, int value) {
  const auto& t = kind_table(kind);
  assert(value >= 0 && value < static_cast<int>(t.size()));
  return t[value];
}

std::span<const std::string_view> generic_nouns() {
  static const Forms kNouns = {"thing", "object"};
  return kNouns;
}

std::optional<WordSense> lookup_word(std::string_view word) {
  for (AttributeKind k : kAttributeKinds) {
    const auto& t = kind_table(k);
    for (int v = 0; v < static_cast<int>(t.size()); ++v) {
      for (std::string_view form : t[v]) {
        if (form == word) return WordSense{k, v};
      }
    }
  }
  return std::nullopt;
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kFront: return "front";
    case Direction::kBehind: return "behind";
  }
  return "";
}

std::optional<Direction> parse_direction(std::string_view name) {
  for (Direction d : kDirections) {
    if (direction_name(d) == name) return d;
  }
  return std::nullopt;
}

Direction opposite(Direction d) {
  switch (d) {
    case Direction::kLeft: return Direction::kRight;
    case Direction::kRight: return Direction::kLeft;
    case Direction::kFront: return Direction::kBehind;
    case Direction::kBehind: return Direction::kFront;
  }
  return d;
}

std::string_view visibility_name(Visibility v) {
  switch (v) {
    case Visibility::kFullyVisible: return "fully_visible";
    case Visibility::kPartiallyVisible: return "partially_visible";
    case Visibility::kAmbiguous: return "ambiguous";
  }
  return "";
}

std::optional<Visibility> parse_visibility(std::string_view name) {
  for (Visibility v : {Visibility::kFullyVisible, Visibility::kPartiallyVisible,
                       Visibility::kAmbiguous}) {
    if (visibility_name(v) == name) return v;
  }
  return std::nullopt;
}

}  // namespace refgen
