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

// Referring-expression sampling. An expression is built by walking a family's
// skeleton: describe slots get attribute filters chosen so that the number of
// surviving objects is uniform over what the scene allows, relate and same
// slots get random parameters with a nonempty result, and the finished
// program is re-executed against the incremental trace before it is kept.

#ifndef REFGEN_GENERATOR_H_
#define REFGEN_GENERATOR_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "refgen/executor.h"
#include "refgen/program.h"
#include "refgen/render.h"
#include "refgen/rng.h"
#include "refgen/scene.h"
#include "refgen/templates.h"

namespace refgen {

enum class DecorationPolicy { kNone, kOrdinalOnly, kVisibleOnly, kEither };

struct ComboOptions {
  DecorationPolicy decoration = DecorationPolicy::kNone;
  double decoration_probability = 0.0;
  int min_filters = 0;
  std::array<bool, 4> excluded{};  // kinds never filtered on, by AttributeKind
};

struct AttributeChoice {
  Description description;
  ObjectSet survivors;  // candidates passing the attribute filters
  ObjectSet result;     // survivors after the decoration, if any
  int target = -1;      // survivor the decoration singles out; -1 when none survive
};

// Distinct survivor counts over all attribute-value combinations allowed by
// `options`, ascending. Zero is included when some combination matches
// nothing.
std::vector<int> achievable_survivor_counts(const SceneGraph& scene,
                                            const ObjectSet& candidates,
                                            const ComboOptions& options);

// Picks a distinct survivor count uniformly, then uniformly one combination
// achieving it, then maybe one decoration anchored on a random survivor.
// The result may be empty. `render` may be null, which rules out visibility
// decorations.
AttributeChoice choose_attribute_combo(const SceneGraph& scene, const RenderResult* render,
                                       const ObjectSet& candidates,
                                       const ComboOptions& options, Rng& rng);

struct GenerationOptions {
  int retry_cap = 200;       // attempts per expression
  int family_attempts = 1;   // consecutive tries per family draw
  int anchor_retries = 20;   // local redraws until an anchor is unique
  double decoration_probability = 0.05;
  int false_premise_min_filters = 2;
  SynonymPolicy synonyms = SynonymPolicy::kRandom;

  void validate() const;
  bool operator==(const GenerationOptions&) const = default;
};

struct RefExpression {
  int expression_id = 0;
  int scene_id = 0;
  std::string family;
  Category category = Category::kZeroRelate;
  std::string text;
  Program program;
  StepTrace trace;
  bool is_false_premise = false;

  const ObjectSet& referred_ids() const { return trace.final_set(); }
  bool is_single_object() const { return referred_ids().size() == 1; }
  bool operator==(const RefExpression&) const = default;
};

// One expression from a family drawn by catalog weight. After
// family_attempts rejected tries the family is drawn again. Throws
// Error(kGenerationExhausted) naming the scene after `retry_cap` rejected
// attempts, Error(kTraceMismatch)
// if re-execution disagrees with the trace recorded while building.
// sample_from_family keeps the family fixed across attempts.
RefExpression sample_expression(const SceneGraph& scene, const RenderResult& render,
                                const TemplateCatalog& catalog,
                                const GenerationOptions& options, Rng& rng);
RefExpression sample_from_family(const SceneGraph& scene, const RenderResult& render,
                                 const TemplateFamily& family,
                                 const GenerationOptions& options, Rng& rng);

// Expression whose final set is empty while every earlier node is followed
// normally and refers to at least one object. Only the last describe is made
// false; families whose root is not a describe node are skipped.
RefExpression generate_false_premise(const SceneGraph& scene, const RenderResult& render,
                                     const TemplateCatalog& catalog,
                                     const GenerationOptions& options, Rng& rng);
RefExpression false_premise_from_family(const SceneGraph& scene,
                                        const RenderResult& render,
                                        const TemplateFamily& family,
                                        const GenerationOptions& options, Rng& rng);

enum class DatasetMode { kReferring, kFalsePremise };
std::string_view dataset_mode_name(DatasetMode m);
std::optional<DatasetMode> parse_dataset_mode(std::string_view name);

inline constexpr std::string_view kManifestFormatVersion = "1.0";

struct DatasetManifest {
  std::string format_version = std::string(kManifestFormatVersion);
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  std::uint64_t seed = 0;
  int per_image = 0;
  DatasetMode mode = DatasetMode::kReferring;
  std::vector<SceneGraph> scenes;
  std::vector<RefExpression> expressions;

  std::map<Category, int> category_counts() const;
  // Structural invariants: per-scene counts, ids, trace shapes and the
  // referring / false-premise final-set rule. Throws Error(kFormat).
  void check_invariants() const;
};

// `per_image` expressions for every scene. Scene k draws from stream
// scene.index of `seed`; expression ids are position * per_image + j. The
// result does not depend on `threads`.
DatasetManifest generate_dataset(std::vector<SceneGraph> scenes, int per_image,
                                 const TemplateCatalog& catalog, std::uint64_t seed,
                                 const GenerationOptions& options,
                                 DatasetMode mode = DatasetMode::kReferring,
                                 int threads = 0);

}  // namespace refgen

#endif  // REFGEN_GENERATOR_H_
