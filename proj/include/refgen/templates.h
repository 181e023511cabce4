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

// Referring-expression families. A family pairs a program skeleton with
// parameter slots and several text templates realizing it. Families live in
// data/templates/, one JSON file each; see docs/formats.md for the schema.
//
// Slots:
//   D<n>  describe: attribute filters plus optional ordinal/visible decoration
//   R<n>  relate direction
//   A<n>  same-attribute kind
// Text placeholders: {D1:pl} "cyan cubes", {D1:opt} "cyan cube(s)",
// {D1:sg} "cyan cube", {R1} "to the left of", {A1} "size".

#ifndef REFGEN_TEMPLATES_H_
#define REFGEN_TEMPLATES_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "refgen/rng.h"
#include "refgen/vocab.h"

namespace refgen {

enum class Category {
  kZeroRelate,
  kOneRelate,
  kTwoRelate,
  kThreeRelate,
  kAndLogic,
  kOrLogic,
  kSameRelate,
};
inline constexpr std::array<Category, 7> kCategories = {
    Category::kZeroRelate, Category::kOneRelate, Category::kTwoRelate,
    Category::kThreeRelate, Category::kAndLogic, Category::kOrLogic,
    Category::kSameRelate};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

enum class SkeletonOp { kScene, kDescribe, kUnique, kRelate, kSame, kAnd, kOr };

struct SkeletonNode {
  SkeletonOp op = SkeletonOp::kScene;
  std::string slot;  // D*/R*/A* for describe/relate/same
  std::vector<int> inputs;
  int min_filters = 0;                   // describe only
  std::optional<AttributeKind> attribute;  // same only; drawn per expression if unset
};

enum class NounForm { kPlural, kOptionalPlural, kSingular };

struct TextPiece {
  std::string literal;  // used when slot is empty
  std::string slot;
  NounForm form = NounForm::kPlural;
};

struct TextTemplate {
  std::string source;
  std::vector<TextPiece> pieces;
};

// Parses "{D1:pl} ..." into pieces; throws Error(kTemplate) on bad syntax.
TextTemplate parse_text_template(std::string_view text);

struct TemplateFamily {
  std::string name;
  Category category = Category::kZeroRelate;
  std::vector<SkeletonNode> skeleton;
  std::vector<TextTemplate> texts;
  // Pairs of skeleton nodes whose referent sets must differ.
  std::vector<std::pair<int, int>> distinct;

  // Throws Error(kTemplate) on any arity, slot, or category inconsistency.
  void validate() const;
  std::vector<std::string> slots() const;
};

TemplateFamily parse_family(const nlohmann::json& document);

class TemplateCatalog {
 public:
  TemplateCatalog() = default;
  explicit TemplateCatalog(std::vector<TemplateFamily> families);

  // Loads every *.json file of `dir` in file-name order.
  static TemplateCatalog from_directory(const std::filesystem::path& dir);
  // Directory bundled with the build.
  static TemplateCatalog load_default();

  const std::vector<TemplateFamily>& families() const { return families_; }
  bool empty() const { return families_.empty(); }
  const TemplateFamily* find(std::string_view name) const;

  // Sampling weight of each family: 2 for families of categories holding
  // fewer families than the median category, 1 otherwise.
  const std::vector<double>& weights() const { return weights_; }
  // Throws Error(kConfig) for unknown families or negative weights.
  void set_weight(std::string_view family, double weight);
  int family_count(Category c) const;
  // Probability that a sampled family belongs to `c`.
  double category_probability(Category c) const;

 private:
  std::vector<TemplateFamily> families_;
  std::vector<double> weights_;
};

std::filesystem::path default_template_dir();

// --- Slot bindings and realization -----------------------------------------

struct Decoration {
  enum class Kind { kNone, kOrdinal, kVisible };
  Kind kind = Kind::kNone;
  int rank = 1;                            // ordinal
  Direction direction = Direction::kLeft;  // ordinal: "from <direction>"
  Visibility flag = Visibility::kFullyVisible;  // visible

  bool operator==(const Decoration&) const = default;
};

struct Description {
  std::array<std::optional<int>, 4> filters;  // indexed by AttributeKind
  Decoration decoration;

  std::optional<int> filter(AttributeKind k) const {
    return filters[static_cast<int>(k)];
  }
  int filter_count() const;
  bool operator==(const Description&) const = default;
};

struct SlotBindings {
  std::map<std::string, Description> descriptions;
  std::map<std::string, Direction> relations;
  std::map<std::string, AttributeKind> attributes;
};

enum class SynonymPolicy { kCanonical, kRandom };

// Noun phrase for a description without article, e.g. "big red ball(s)",
// "second one of the big thing(s) from front", "fully visible yellow ball".
std::string realize_description(const Description& d, NounForm form, Rng& rng,
                                SynonymPolicy policy);
std::string realize_relation(Direction d, Rng& rng, SynonymPolicy policy);
std::string ordinal_word(int rank);

// Throws Error(kTemplate) when the template names a slot without a binding.
std::string realize_text(const SlotBindings& bindings, const TextTemplate& text,
                         Rng& rng, SynonymPolicy policy = SynonymPolicy::kRandom);

}  // namespace refgen

#endif  // REFGEN_TEMPLATES_H_
