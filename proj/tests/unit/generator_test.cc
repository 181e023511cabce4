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

#include "refgen/generator.h"

#include <algorithm>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "refgen/errors.h"
#include "refgen/executor.h"
#include "refgen/io.h"
#include "refgen/render.h"
#include "support/fixtures.h"

namespace refgen {
namespace {

using testing::attrs;
using testing::axial_camera;
using testing::scene_of;

double chi_square_p(const std::vector<int>& observed) {
  double total = 0.0;
  for (int o : observed) total += o;
  const double expected = total / observed.size();
  double stat = 0.0;
  for (int o : observed) stat += (o - expected) * (o - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Five objects with pairwise distinct colors.
SceneGraph distinct_color_scene() {
  return scene_of({{attrs(Size::kLarge, Color::kRed, Material::kMetal, Shape::kCube), -2.0, 0.0},
                   {attrs(Size::kSmall, Color::kBlue, Material::kRubber, Shape::kSphere), -1.0, 1.0},
                   {attrs(Size::kLarge, Color::kGreen, Material::kRubber, Shape::kCylinder), 0.0, -1.0},
                   {attrs(Size::kSmall, Color::kYellow, Material::kMetal, Shape::kCube), 1.0, 1.5},
                   {attrs(Size::kLarge, Color::kPurple, Material::kMetal, Shape::kSphere), 2.0, 0.0}});
}

TEST_CASE("unique colors make counts 1 and |scene| achievable") {
  const SceneGraph s = distinct_color_scene();
  const std::vector<int> counts = achievable_survivor_counts(s, s.all_ids(), ComboOptions{});
  CHECK(std::find(counts.begin(), counts.end(), 1) != counts.end());
  CHECK(std::find(counts.begin(), counts.end(), s.size()) != counts.end());
  CHECK(std::find(counts.begin(), counts.end(), 0) != counts.end());
  CHECK(std::is_sorted(counts.begin(), counts.end()));
}

TEST_CASE("min_filters and excluded kinds restrict combinations") {
  const SceneGraph s = distinct_color_scene();
  ComboOptions options;
  options.min_filters = 1;
  std::vector<int> counts = achievable_survivor_counts(s, s.all_ids(), options);
  CHECK(std::find(counts.begin(), counts.end(), s.size()) == counts.end());
  Rng rng(3);
  options.excluded[static_cast<int>(AttributeKind::kColor)] = true;
  for (int i = 0; i < 200; ++i) {
    const AttributeChoice c = choose_attribute_combo(s, nullptr, s.all_ids(), options, rng);
    CHECK(c.description.filter_count() >= 1);
    CHECK_FALSE(c.description.filter(AttributeKind::kColor).has_value());
    CHECK(c.result.is_subset_of(c.survivors));
  }
}

TEST_CASE("survivor counts are drawn uniformly") {
  const SceneGraph s = testing::default_scenes(1, 12)[0];
  const std::vector<int> counts = achievable_survivor_counts(s, s.all_ids(), ComboOptions{});
  std::map<int, int> index;
  for (std::size_t i = 0; i < counts.size(); ++i) index[counts[i]] = static_cast<int>(i);
  std::vector<int> observed(counts.size(), 0);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const AttributeChoice c = choose_attribute_combo(s, nullptr, s.all_ids(), ComboOptions{}, rng);
    REQUIRE(index.count(c.survivors.size()) == 1);
    ++observed[index[c.survivors.size()]];
    if (!c.survivors.empty()) CHECK(c.survivors.contains(c.target));
  }
  CHECK(chi_square_p(observed) > 0.01);
}

TEST_CASE("decorations single out the target") {
  const SceneGraph s = testing::default_scenes(1, 5)[0];
  const RenderResult r = rasterize(s);
  ComboOptions options;
  options.decoration = DecorationPolicy::kEither;
  options.decoration_probability = 1.0;
  Rng rng(6);
  int decorated = 0;
  for (int i = 0; i < 500; ++i) {
    const AttributeChoice c = choose_attribute_combo(s, &r, s.all_ids(), options, rng);
    const Decoration& d = c.description.decoration;
    if (d.kind == Decoration::Kind::kNone) continue;
    ++decorated;
    CHECK(c.survivors.size() >= 2);
    CHECK(c.result.contains(c.target));
    if (d.kind == Decoration::Kind::kOrdinal) {
      CHECK(c.result == ObjectSet{c.target});
      CHECK(order_along(s, c.survivors, d.direction).at(d.rank - 1) == c.target);
    } else {
      CHECK(d.flag == r.objects[c.target].visibility);
    }
  }
  CHECK(decorated > 0);
}

TEST_CASE("zero_relate expressions are filters with an optional decoration") {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  const TemplateFamily& f = *catalog.find("zero_relate_describe");
  GenerationOptions options;
  options.decoration_probability = 0.5;
  Rng rng(7);
  for (const SceneGraph& s : testing::default_scenes(30, 7)) {
    const RenderResult r = rasterize(s);
    const RefExpression e = sample_from_family(s, r, f, options, rng);
    const Program& p = e.program;
    CHECK(p.node(0).function == Function::kScene);
    for (int i = 1; i < p.size(); ++i) {
      const Function fn = p.node(i).function;
      const bool tail = i == p.root() && (fn == Function::kOrdinal || fn == Function::kVisible);
      CHECK((filter_kind(fn).has_value() || tail));
    }
    CHECK_FALSE(e.referred_ids().empty());
    CHECK(execute(p, s, &r) == e.trace);
    CHECK(e.category == Category::kZeroRelate);
  }
}

TEST_CASE("no expression combines ordinal and visible") {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  GenerationOptions options;
  options.decoration_probability = 0.5;
  const DatasetManifest m = generate_dataset(testing::default_scenes(50, 8), 10, catalog, 8, options);
  int ordinal = 0;
  int visible = 0;
  for (const RefExpression& e : m.expressions) {
    const bool o = e.program.contains(Function::kOrdinal);
    const bool v = e.program.contains(Function::kVisible);
    CHECK_FALSE((o && v));
    CHECK_FALSE((e.text.find(" one of the ") != std::string::npos &&
                 e.text.find(" visible ") != std::string::npos));
    ordinal += o;
    visible += v;
  }
  CHECK(ordinal > 0);
  CHECK(visible > 0);
}

TEST_CASE("a false premise about spheres in a scene without spheres") {
  const SceneGraph s = distinct_color_scene();
  SceneGraph no_spheres = s;
  no_spheres.objects.erase(no_spheres.objects.begin() + 4);
  no_spheres.objects.erase(no_spheres.objects.begin() + 1);
  for (std::size_t i = 0; i < no_spheres.objects.size(); ++i) no_spheres.objects[i].id = static_cast<int>(i);
  const Program red_sphere = Program::from_nodes(
      {{Function::kScene, {}, {}},
       {Function::kFilterColor, {"red"}, {0}},
       {Function::kFilterShape, {"sphere"}, {1}}});
  const StepTrace t = execute(red_sphere, no_spheres, nullptr);
  CHECK(t.steps[1].size() == 1);
  CHECK(t.final_set().empty());

  const TemplateCatalog catalog = TemplateCatalog::load_default();
  const RenderResult r = rasterize(no_spheres);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const RefExpression e = generate_false_premise(no_spheres, r, catalog, GenerationOptions{}, rng);
    CHECK(e.is_false_premise);
    CHECK(e.referred_ids().empty());
    CHECK(execute(e.program, no_spheres, &r) == e.trace);
  }
}

TEST_CASE("false premises keep their first filter nonempty") {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  Rng rng(10);
  for (const SceneGraph& s : testing::default_scenes(100, 10)) {
    const RenderResult r = rasterize(s);
    const RefExpression e = generate_false_premise(s, r, catalog, GenerationOptions{}, rng);
    CHECK(e.referred_ids().empty());
    for (int i = 0; i < e.program.size(); ++i) {
      if (filter_kind(e.program.node(i).function)) {
        CHECK_FALSE(e.trace.steps[i].empty());
        break;
      }
    }
  }
}

TEST_CASE("datasets are deterministic and thread independent") {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  const std::vector<SceneGraph> scenes = testing::default_scenes(100, 1);
  const DatasetManifest a = generate_dataset(scenes, 10, catalog, 1, GenerationOptions{}, DatasetMode::kReferring, 1);
  const DatasetManifest b = generate_dataset(scenes, 10, catalog, 1, GenerationOptions{}, DatasetMode::kReferring, 4);
  CHECK(a.expressions.size() == 1000);
  CHECK(dump_document(manifest_to_json(a)) == dump_document(manifest_to_json(b)));
  CHECK_NOTHROW(a.check_invariants());
  for (int i = 0; i < 1000; ++i) CHECK(a.expressions[i].expression_id == i);
  const DatasetManifest c = generate_dataset(scenes, 10, catalog, 2, GenerationOptions{});
  CHECK(dump_document(manifest_to_json(a)) != dump_document(manifest_to_json(c)));
}

TEST_CASE("category histogram follows the doubled weights when families are kept") {
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  GenerationOptions options;
  options.family_attempts = options.retry_cap;
  const DatasetManifest m = generate_dataset(testing::default_scenes(350, 13), 10, catalog, 13, options);
  std::vector<int> observed;
  for (Category c : kCategories) observed.push_back(m.category_counts()[c]);
  CHECK(chi_square_p(observed) > 0.01);
}

TEST_CASE("option validation") {
  GenerationOptions options;
  options.family_attempts = 0;
  CHECK_THROWS_AS(options.validate(), Error);
  options = GenerationOptions{};
  options.decoration_probability = 1.5;
  CHECK_THROWS_AS(options.validate(), Error);
}

TEST_CASE("exhaustion names the scene") {
  // One object: no relate family can complete.
  SceneGraph s = scene_of({{attrs(Size::kLarge, Color::kRed, Material::kMetal, Shape::kCube), 0.0, 0.0}});
  s.index = 37;
  const RenderResult r = rasterize(s);
  const TemplateCatalog catalog = TemplateCatalog::load_default();
  Rng rng(11);
  try {
    sample_from_family(s, r, *catalog.find("one_relate_describe"), GenerationOptions{}, rng);
    FAIL("expected exhaustion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGenerationExhausted);
    CHECK(std::string(e.what()).find("37") != std::string::npos);
  }
}

}  // namespace
}  // namespace refgen
