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

#include "refgen/config.h"

#include "doctest.h"
#include "json.hpp"
#include "refgen/errors.h"

namespace refgen {
namespace {

using nlohmann::json;

TEST_CASE("config round-trips and hashes stably") {
  GeneratorConfig c;
  c.seed = 12;
  c.scene.split = SplitCondition::kA;
  c.generation.decoration_probability = 0.1;
  c.family_weights["zero_relate_describe"] = 3.0;
  const GeneratorConfig back = GeneratorConfig::from_json(json::parse(c.to_json().dump()));
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  CHECK(c.hash().size() == 16);
  GeneratorConfig other = c;
  other.seed = 13;
  CHECK(other.hash() != c.hash());
}

TEST_CASE("missing keys keep defaults and unknown keys are rejected") {
  const GeneratorConfig c = GeneratorConfig::from_json(json::parse(R"({"seed": 5})"));
  CHECK(c.seed == 5);
  CHECK(c.per_image == 10);
  CHECK(c.generation.retry_cap == 200);
  CHECK_THROWS_AS(GeneratorConfig::from_json(json::parse(R"({"sead": 5})")), Error);
}

TEST_CASE("out-of-range values") {
  GeneratorConfig c;
  CHECK_NOTHROW(c.validate());
  c.per_image = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = GeneratorConfig{};
  c.scene.camera.vertical_fov = 180.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("family weights apply to the catalog") {
  GeneratorConfig c;
  c.family_weights["zero_relate_describe"] = 0.0;
  TemplateCatalog catalog = TemplateCatalog::load_default();
  c.apply_weights(catalog);
  CHECK(catalog.category_probability(Category::kZeroRelate) == 0.0);
  c.family_weights["missing"] = 1.0;
  CHECK_THROWS_AS(c.apply_weights(catalog), Error);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

}  // namespace
}  // namespace refgen
