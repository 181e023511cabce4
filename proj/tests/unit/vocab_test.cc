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

#include <string>

#include "doctest.h"

namespace refgen {
namespace {

TEST_CASE("vocabulary sizes") {
  CHECK(value_count(AttributeKind::kColor) == 8);
  CHECK(value_count(AttributeKind::kSize) == 2);
  CHECK(value_count(AttributeKind::kMaterial) == 2);
  CHECK(value_count(AttributeKind::kShape) == 3);
}

TEST_CASE("canonical names round-trip and every synonym maps back") {
  for (AttributeKind k : kAttributeKinds) {
    for (int v = 0; v < value_count(k); ++v) {
      const auto name = canonical_name(k, v);
      REQUIRE(parse_canonical(k, name) == v);
      const auto forms = synonyms(k, v);
      REQUIRE(!forms.empty());
      CHECK(forms[0] == name);
      for (std::string_view s : forms) {
        const auto sense = lookup_word(s);
        REQUIRE(sense.has_value());
        CHECK(sense->kind == k);
        CHECK(sense->value == v);
      }
    }
  }
}

TEST_CASE("listed synonyms") {
  CHECK(lookup_word("block")->value == static_cast<int>(Shape::kCube));
  CHECK(lookup_word("ball")->value == static_cast<int>(Shape::kSphere));
  CHECK(lookup_word("shiny")->value == static_cast<int>(Material::kMetal));
  CHECK(lookup_word("metallic")->value == static_cast<int>(Material::kMetal));
  CHECK(lookup_word("matte")->value == static_cast<int>(Material::kRubber));
  CHECK(lookup_word("big")->value == static_cast<int>(Size::kLarge));
  CHECK(lookup_word("tiny")->value == static_cast<int>(Size::kSmall));
  CHECK_FALSE(lookup_word("pink").has_value());
}

TEST_CASE("directions and visibility names") {
  for (Direction d : kDirections) {
    CHECK(parse_direction(direction_name(d)) == d);
    CHECK(opposite(opposite(d)) == d);
    CHECK(opposite(d) != d);
  }
  CHECK(opposite(Direction::kLeft) == Direction::kRight);
  CHECK(opposite(Direction::kFront) == Direction::kBehind);
  CHECK(parse_visibility("fully_visible") == Visibility::kFullyVisible);
  CHECK(parse_visibility("partially_visible") == Visibility::kPartiallyVisible);
}

TEST_CASE("attributes are indexable by kind") {
  Attributes a;
  a.set(AttributeKind::kColor, static_cast<int>(Color::kCyan));
  a.set(AttributeKind::kShape, static_cast<int>(Shape::kCylinder));
  CHECK(a.color == Color::kCyan);
  CHECK(a.get(AttributeKind::kShape) == static_cast<int>(Shape::kCylinder));
}

}  // namespace
}  // namespace refgen
