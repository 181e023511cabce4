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

// Closed attribute vocabulary of the block world: four attribute kinds, their
// canonical values, and the surface synonyms used when realizing text.

#ifndef REFGEN_VOCAB_H_
#define REFGEN_VOCAB_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace refgen {

enum class Color { kGray, kRed, kBlue, kGreen, kBrown, kPurple, kCyan, kYellow };
enum class Size { kLarge, kSmall };
enum class Material { kMetal, kRubber };
enum class Shape { kCube, kSphere, kCylinder };

// Order matters: it is the adjective order of realized noun phrases
// ("large red metal cube") and the order filters appear in programs.
enum class AttributeKind { kSize, kColor, kMaterial, kShape };
inline constexpr std::array<AttributeKind, 4> kAttributeKinds = {
    AttributeKind::kSize, AttributeKind::kColor, AttributeKind::kMaterial,
    AttributeKind::kShape};

enum class Direction { kLeft, kRight, kFront, kBehind };
inline constexpr std::array<Direction, 4> kDirections = {
    Direction::kLeft, Direction::kRight, Direction::kFront, Direction::kBehind};

enum class Visibility { kFullyVisible, kPartiallyVisible, kAmbiguous };

// Attribute values of one object, indexable by kind.
struct Attributes {
  Size size = Size::kLarge;
  Color color = Color::kGray;
  Material material = Material::kMetal;
  Shape shape = Shape::kCube;

  int get(AttributeKind kind) const;
  void set(AttributeKind kind, int value);
  bool operator==(const Attributes&) const = default;
};

int value_count(AttributeKind kind);
std::string_view attribute_kind_name(AttributeKind kind);
std::optional<AttributeKind> parse_attribute_kind(std::string_view name);

std::string_view canonical_name(AttributeKind kind, int value);
std::optional<int> parse_canonical(AttributeKind kind, std::string_view name);

// Surface forms of a value; the canonical name is always first.
std::span<const std::string_view> synonyms(AttributeKind kind, int value);
// Generic head nouns used when no shape is named.
std::span<const std::string_view> generic_nouns();

struct WordSense {
  AttributeKind kind;
  int value;
};
// Maps any canonical name or synonym to the value it denotes.
std::optional<WordSense> lookup_word(std::string_view word);

std::string_view direction_name(Direction d);
std::optional<Direction> parse_direction(std::string_view name);
Direction opposite(Direction d);

std::string_view visibility_name(Visibility v);
std::optional<Visibility> parse_visibility(std::string_view name);

inline std::string_view color_name(Color c) {
  return canonical_name(AttributeKind::kColor, static_cast<int>(c));
}
inline std::string_view size_name(Size s) {
  return canonical_name(AttributeKind::kSize, static_cast<int>(s));
}
inline std::string_view material_name(Material m) {
  return canonical_name(AttributeKind::kMaterial, static_cast<int>(m));
}
inline std::string_view shape_name(Shape s) {
  return canonical_name(AttributeKind::kShape, static_cast<int>(s));
}

}  // namespace refgen

#endif  // REFGEN_VOCAB_H_
