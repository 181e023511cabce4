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
#include <atomic>
#include <exception>
#include <thread>

#include "refgen/errors.h"

namespace refgen {
namespace {

// Stream of the master seed reserved for expression sampling, kept apart from
// the streams sample_scenes() uses for scene layout.
constexpr std::uint64_t kExpressionStream = 0x657870725f737472ULL;

// Thrown inside a generation attempt to reject it.
struct Rejected {};

ObjectSet survivors_of(const SceneGraph& scene, const ObjectSet& candidates,
                       const Description& d) {
  ObjectSet out;
  for (int id : candidates) {
    const Attributes& a = scene.objects[id].attributes;
    bool keep = true;
    for (AttributeKind k : kAttributeKinds) {
      if (auto v = d.filter(k)) keep = keep && a.get(k) == *v;
    }
    if (keep) out.insert(id);
  }
  return out;
}

// Every value assignment over every allowed subset of kinds, grouped by the
// number of candidates it keeps. Zero is a possible count.
std::map<int, std::vector<Description>> combos_by_count(const SceneGraph& scene,
                                                        const ObjectSet& candidates,
                                                        const ComboOptions& options) {
  std::map<int, std::vector<Description>> groups;
  Description d;
  auto visit = [&](auto& self, int k, int used) -> void {
    if (k == 4) {
      if (used >= options.min_filters) {
        groups[survivors_of(scene, candidates, d).size()].push_back(d);
      }
      return;
    }
    d.filters[k].reset();
    self(self, k + 1, used);
    if (options.excluded[k]) return;
    for (int v = 0; v < value_count(static_cast<AttributeKind>(k)); ++v) {
      d.filters[k] = v;
      self(self, k + 1, used + 1);
    }
    d.filters[k].reset();
  };
  visit(visit, 0, 0);
  if (groups.empty()) {
    throw Error(ErrorCode::kInvalidValue, "no attribute combination satisfies min_filters = " +
                                              std::to_string(options.min_filters));
  }
  return groups;
}

bool visibility_describable(const RenderResult* render, const ObjectSet& set) {
  if (render == nullptr) return false;
  for (int id : set) {
    if (id >= static_cast<int>(render->objects.size())) return false;
    const auto& v = render->objects[id].visibility;
    if (!v || *v == Visibility::kAmbiguous) return false;
  }
  return true;
}

DecorationPolicy policy_after(Decoration::Kind used) {
  switch (used) {
    case Decoration::Kind::kOrdinal: return DecorationPolicy::kOrdinalOnly;
    case Decoration::Kind::kVisible: return DecorationPolicy::kVisibleOnly;
    case Decoration::Kind::kNone: return DecorationPolicy::kEither;
  }
  return DecorationPolicy::kEither;
}

class ExpressionBuilder {
 public:
  ExpressionBuilder(const SceneGraph& scene, const RenderResult& render,
                    const TemplateFamily& family, const GenerationOptions& options, Rng& rng,
                    bool false_premise)
      : scene_(scene),
        render_(render),
        family_(family),
        options_(options),
        rng_(rng),
        false_premise_(false_premise) {}

  std::optional<RefExpression> attempt() {
    nodes_.clear();
    sets_.clear();
    out_.assign(family_.skeleton.size(), -1);
    bindings_ = SlotBindings{};
    used_ = Decoration::Kind::kNone;
    try {
      for (int i = 0; i < static_cast<int>(family_.skeleton.size()); ++i) build(i);
    } catch (const Rejected&) {
      return std::nullopt;
    }
    for (auto [a, b] : family_.distinct) {
      if (sets_[out_[a]] == sets_[out_[b]]) return std::nullopt;
    }
    const ObjectSet& final_set = sets_[out_.back()];
    if (false_premise_ != final_set.empty()) return std::nullopt;
    if (out_.back() != static_cast<int>(nodes_.size()) - 1) {
      throw Error(ErrorCode::kTraceMismatch,
                  "family '" + family_.name + "': root is not the last program node");
    }

    RefExpression e;
    e.scene_id = scene_.index;
    e.family = family_.name;
    e.category = family_.category;
    e.is_false_premise = false_premise_;
    e.program = Program::from_nodes(nodes_);
    e.trace = execute(e.program, scene_, &render_);
    if (e.trace.steps != sets_) {
      throw Error(ErrorCode::kTraceMismatch,
                  "scene " + std::to_string(scene_.index) + ", family '" + family_.name +
                      "': re-execution disagrees with the generation trace");
    }
    e.text = realize_text(bindings_, rng_.pick(family_.texts), rng_, options_.synonyms);
    return e;
  }

 private:
  int append(ProgramNode node) {
    std::vector<ObjectSet> inputs;
    for (int in : node.inputs) inputs.push_back(sets_[in]);
    ObjectSet result;
    try {
      result = eval_node(node, inputs, scene_, &render_);
    } catch (const Error&) {
      throw Rejected{};
    }
    nodes_.push_back(std::move(node));
    sets_.push_back(result);
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool feeds_unique(int i) const {
    for (const SkeletonNode& n : family_.skeleton) {
      if (n.op == SkeletonOp::kUnique && n.inputs[0] == i) return true;
    }
    return false;
  }

  void build(int i) {
    const SkeletonNode& n = family_.skeleton[i];
    switch (n.op) {
      case SkeletonOp::kScene:
        out_[i] = append({Function::kScene, {}, {}});
        return;
      case SkeletonOp::kUnique:
        out_[i] = append({Function::kUnique, {}, {out_[n.inputs[0]]}});
        return;
      case SkeletonOp::kAnd:
      case SkeletonOp::kOr:
        out_[i] = append({n.op == SkeletonOp::kAnd ? Function::kAnd : Function::kOr,
                          {},
                          {out_[n.inputs[0]], out_[n.inputs[1]]}});
        return;
      case SkeletonOp::kRelate:
        build_relate(i, n);
        return;
      case SkeletonOp::kSame:
        build_same(i, n);
        return;
      case SkeletonOp::kDescribe:
        if (false_premise_ && i + 1 == static_cast<int>(family_.skeleton.size())) {
          // Only the last description may be false; everything before it
          // must still refer to something.
          for (const ObjectSet& s : sets_) {
            if (s.empty()) throw Rejected{};
          }
          build_false_describe(i, n);
        } else {
          build_describe(i, n);
        }
        return;
    }
  }

  void build_relate(int i, const SkeletonNode& n) {
    const int anchor_node = out_[n.inputs[0]];
    if (sets_[anchor_node].size() != 1) throw Rejected{};
    // Any of the four directions; an empty result rejects the attempt.
    const Direction d = rng_.pick(std::span<const Direction>(kDirections));
    if (spatial_related(scene_, sets_[anchor_node].first(), d).empty()) throw Rejected{};
    bindings_.relations[n.slot] = d;
    out_[i] = append({Function::kRelate, {std::string(direction_name(d))}, {anchor_node}});
  }

  void build_same(int i, const SkeletonNode& n) {
    const int anchor_node = out_[n.inputs[0]];
    if (sets_[anchor_node].size() != 1) throw Rejected{};
    AttributeKind kind;
    if (n.attribute) {
      kind = *n.attribute;
    } else {
      std::vector<AttributeKind> usable;
      for (AttributeKind k : kAttributeKinds) {
        if (!eval_node({same_function(k), {}, {anchor_node}}, {&sets_[anchor_node], 1}, scene_,
                       &render_)
                 .empty()) {
          usable.push_back(k);
        }
      }
      if (usable.empty()) throw Rejected{};
      kind = rng_.pick(usable);
    }
    bindings_.attributes[n.slot] = kind;
    out_[i] = append({same_function(kind), {}, {anchor_node}});
  }

  ComboOptions combo_options(const SkeletonNode& n) const {
    ComboOptions o;
    o.min_filters = n.min_filters;
    o.decoration = policy_after(used_);
    o.decoration_probability = options_.decoration_probability;
    const SkeletonNode& input = family_.skeleton[n.inputs[0]];
    if (input.op == SkeletonOp::kSame) {
      o.excluded[static_cast<int>(*bindings_attribute(input))] = true;
    }
    return o;
  }

  std::optional<AttributeKind> bindings_attribute(const SkeletonNode& same) const {
    auto it = bindings_.attributes.find(same.slot);
    if (it == bindings_.attributes.end()) return same.attribute;
    return it->second;
  }

  int emit_description(int input, const Description& d) {
    int cur = input;
    for (AttributeKind k : kAttributeKinds) {
      if (auto v = d.filter(k)) {
        cur = append({filter_function(k), {std::string(canonical_name(k, *v))}, {cur}});
      }
    }
    switch (d.decoration.kind) {
      case Decoration::Kind::kNone:
        break;
      case Decoration::Kind::kOrdinal:
        cur = append({Function::kOrdinal,
                      {std::to_string(d.decoration.rank),
                       std::string(direction_name(d.decoration.direction))},
                      {cur}});
        break;
      case Decoration::Kind::kVisible:
        cur = append({Function::kVisible, {std::string(visibility_name(d.decoration.flag))},
                      {cur}});
        break;
    }
    return cur;
  }

  void build_describe(int i, const SkeletonNode& n) {
    const int input = out_[n.inputs[0]];
    const ObjectSet candidates = sets_[input];
    if (candidates.empty()) throw Rejected{};
    const ComboOptions combo = combo_options(n);
    AttributeChoice choice;
    if (feeds_unique(i)) {
      bool found = false;
      for (int r = 0; r < options_.anchor_retries && !found; ++r) {
        choice = choose_attribute_combo(scene_, &render_, candidates, combo, rng_);
        found = choice.result.size() == 1;
      }
      if (!found) throw Rejected{};
    } else {
      choice = choose_attribute_combo(scene_, &render_, candidates, combo, rng_);
    }
    out_[i] = emit_description(input, choice.description);
    if (sets_[out_[i]] != choice.result) {
      throw Error(ErrorCode::kTraceMismatch,
                  "describe slot " + n.slot + " disagrees with the chosen survivors");
    }
    if (choice.description.decoration.kind != Decoration::Kind::kNone) {
      used_ = choice.description.decoration.kind;
    }
    bindings_.descriptions[n.slot] = choice.description;
  }

  // Two or more filters whose conjunction matches nothing among the candidates.
  void build_false_describe(int i, const SkeletonNode& n) {
    const int input = out_[n.inputs[0]];
    const ObjectSet candidates = sets_[input];
    if (candidates.empty()) throw Rejected{};
    const ComboOptions combo = combo_options(n);
    std::vector<AttributeKind> kinds;
    for (AttributeKind k : kAttributeKinds) {
      if (!combo.excluded[static_cast<int>(k)]) kinds.push_back(k);
    }
    const int min_filters = std::max(options_.false_premise_min_filters, n.min_filters);
    if (static_cast<int>(kinds.size()) < min_filters) throw Rejected{};
    const std::vector<int> ids = candidates.to_vector();
    for (int r = 0; r < options_.anchor_retries; ++r) {
      std::vector<AttributeKind> order = kinds;
      for (std::size_t j = order.size(); j > 1; --j) {
        std::swap(order[j - 1], order[rng_.index(j)]);
      }
      const int count = rng_.uniform_int(min_filters, static_cast<int>(order.size()));
      order.resize(count);
      std::sort(order.begin(), order.end());
      // The first filter in program order takes a real object's value.
      const int seed_object = rng_.pick(ids);
      Description d;
      d.filters[static_cast<int>(order[0])] =
          scene_.objects[seed_object].attributes.get(order[0]);
      for (int j = 1; j < count; ++j) {
        d.filters[static_cast<int>(order[j])] = rng_.uniform_int(0, value_count(order[j]) - 1);
      }
      bool empty = true;
      for (int id : candidates) {
        bool keep = true;
        for (AttributeKind k : order) {
          keep = keep && scene_.objects[id].attributes.get(k) == *d.filter(k);
        }
        empty = empty && !keep;
      }
      if (!empty) continue;
      out_[i] = emit_description(input, d);
      bindings_.descriptions[n.slot] = d;
      return;
    }
    throw Rejected{};
  }

  const SceneGraph& scene_;
  const RenderResult& render_;
  const TemplateFamily& family_;
  const GenerationOptions& options_;
  Rng& rng_;
  const bool false_premise_;

  std::vector<ProgramNode> nodes_;
  std::vector<ObjectSet> sets_;
  std::vector<int> out_;  // program node holding each skeleton node's output
  SlotBindings bindings_;
  Decoration::Kind used_ = Decoration::Kind::kNone;
};

RefExpression run_family(const SceneGraph& scene, const RenderResult& render,
                         const TemplateFamily& family, const GenerationOptions& options,
                         Rng& rng, bool false_premise) {
  options.validate();
  ExpressionBuilder builder(scene, render, family, options, rng, false_premise);
  for (int attempt = 0; attempt < options.retry_cap; ++attempt) {
    if (auto e = builder.attempt()) return *std::move(e);
  }
  throw Error(ErrorCode::kGenerationExhausted,
              "scene " + std::to_string(scene.index) + ": family '" + family.name +
                  "' rejected " + std::to_string(options.retry_cap) + " attempts" +
                  (false_premise ? " (false premise)" : ""));
}

bool supports_false_premise(const TemplateFamily& family) {
  return family.skeleton.back().op == SkeletonOp::kDescribe;
}

// A drawn family gets family_attempts consecutive tries before the family is
// drawn again. With one try per draw, every rejection restarts the whole
// procedure. All tries count against retry_cap.
RefExpression sample_from_catalog(const SceneGraph& scene, const RenderResult& render,
                                  const TemplateCatalog& catalog,
                                  const std::vector<double>& weights,
                                  const GenerationOptions& options, Rng& rng,
                                  bool false_premise) {
  options.validate();
  if (catalog.empty()) throw Error(ErrorCode::kTemplate, "empty template catalog");
  if (std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; })) {
    throw Error(ErrorCode::kTemplate, false_premise ? "no family supports false premises"
                                                    : "every family has weight 0");
  }
  int attempts = 0;
  while (attempts < options.retry_cap) {
    const TemplateFamily& family = catalog.families()[rng.weighted_index(weights)];
    ExpressionBuilder builder(scene, render, family, options, rng, false_premise);
    for (int k = 0; k < options.family_attempts && attempts < options.retry_cap; ++k) {
      ++attempts;
      if (auto e = builder.attempt()) return *std::move(e);
    }
  }
  throw Error(ErrorCode::kGenerationExhausted,
              "scene " + std::to_string(scene.index) + ": " +
                  std::to_string(options.retry_cap) + " attempts rejected" +
                  (false_premise ? " (false premise)" : ""));
}

}  // namespace

std::vector<int> achievable_survivor_counts(const SceneGraph& scene,
                                            const ObjectSet& candidates,
                                            const ComboOptions& options) {
  std::vector<int> out;
  for (const auto& [count, combos] : combos_by_count(scene, candidates, options)) {
    out.push_back(count);
  }
  return out;
}

AttributeChoice choose_attribute_combo(const SceneGraph& scene, const RenderResult* render,
                                       const ObjectSet& candidates,
                                       const ComboOptions& options, Rng& rng) {
  const auto groups = combos_by_count(scene, candidates, options);
  auto group = groups.begin();
  std::advance(group, rng.index(groups.size()));

  AttributeChoice choice;
  choice.description = rng.pick(group->second);
  choice.survivors = survivors_of(scene, candidates, choice.description);
  choice.result = choice.survivors;
  if (choice.survivors.empty()) return choice;
  const std::vector<int> ids = choice.survivors.to_vector();
  choice.target = rng.pick(ids);

  if (options.decoration == DecorationPolicy::kNone || !rng.bernoulli(options.decoration_probability)) {
    return choice;
  }
  std::vector<Decoration::Kind> feasible;
  const bool several = choice.survivors.size() >= 2;
  if (several && options.decoration != DecorationPolicy::kVisibleOnly) {
    feasible.push_back(Decoration::Kind::kOrdinal);
  }
  if (several && options.decoration != DecorationPolicy::kOrdinalOnly &&
      visibility_describable(render, choice.survivors)) {
    feasible.push_back(Decoration::Kind::kVisible);
  }
  if (feasible.empty()) return choice;

  const int target = choice.target;
  Decoration& d = choice.description.decoration;
  d.kind = rng.pick(feasible);
  if (d.kind == Decoration::Kind::kOrdinal) {
    d.direction = rng.pick(std::span<const Direction>(kDirections));
    const std::vector<int> order = order_along(scene, choice.survivors, d.direction);
    d.rank = static_cast<int>(std::find(order.begin(), order.end(), target) - order.begin()) + 1;
    choice.result = ObjectSet{target};
  } else {
    d.flag = *render->objects[target].visibility;
    ObjectSet kept;
    for (int id : choice.survivors) {
      if (*render->objects[id].visibility == d.flag) kept.insert(id);
    }
    choice.result = kept;
  }
  return choice;
}

void GenerationOptions::validate() const {
  if (retry_cap < 1) throw Error(ErrorCode::kConfig, "retry_cap must be >= 1");
  if (family_attempts < 1) throw Error(ErrorCode::kConfig, "family_attempts must be >= 1");
  if (anchor_retries < 1) throw Error(ErrorCode::kConfig, "anchor_retries must be >= 1");
  if (!(decoration_probability >= 0.0 && decoration_probability <= 1.0)) {
    throw Error(ErrorCode::kConfig, "decoration_probability must lie in [0, 1]");
  }
  if (false_premise_min_filters < 1 || false_premise_min_filters > 4) {
    throw Error(ErrorCode::kConfig, "false_premise_min_filters must lie in [1, 4]");
  }
}

RefExpression sample_from_family(const SceneGraph& scene, const RenderResult& render,
                                 const TemplateFamily& family,
                                 const GenerationOptions& options, Rng& rng) {
  return run_family(scene, render, family, options, rng, false);
}

RefExpression sample_expression(const SceneGraph& scene, const RenderResult& render,
                                const TemplateCatalog& catalog,
                                const GenerationOptions& options, Rng& rng) {
  return sample_from_catalog(scene, render, catalog, catalog.weights(), options, rng, false);
}

RefExpression false_premise_from_family(const SceneGraph& scene,
                                        const RenderResult& render,
                                        const TemplateFamily& family,
                                        const GenerationOptions& options, Rng& rng) {
  if (!supports_false_premise(family)) {
    throw Error(ErrorCode::kTemplate,
                "family '" + family.name + "' has no final describe to falsify");
  }
  return run_family(scene, render, family, options, rng, true);
}

RefExpression generate_false_premise(const SceneGraph& scene, const RenderResult& render,
                                     const TemplateCatalog& catalog,
                                     const GenerationOptions& options, Rng& rng) {
  std::vector<double> weights = catalog.weights();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!supports_false_premise(catalog.families()[i])) weights[i] = 0.0;
  }
  return sample_from_catalog(scene, render, catalog, weights, options, rng, true);
}

std::string_view dataset_mode_name(DatasetMode m) {
  return m == DatasetMode::kReferring ? "referring" : "false_premise";
}

std::optional<DatasetMode> parse_dataset_mode(std::string_view name) {
  if (name == "referring") return DatasetMode::kReferring;
  if (name == "false_premise") return DatasetMode::kFalsePremise;
  return std::nullopt;
}

std::map<Category, int> DatasetManifest::category_counts() const {
  std::map<Category, int> counts;
  for (Category c : kCategories) counts[c] = 0;
  for (const RefExpression& e : expressions) ++counts[e.category];
  return counts;
}

void DatasetManifest::check_invariants() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kFormat, what); };
  if (per_image < 1) fail("per_image must be >= 1");
  if (expressions.size() != scenes.size() * static_cast<std::size_t>(per_image)) {
    fail("expected " + std::to_string(scenes.size() * per_image) + " expressions, found " +
         std::to_string(expressions.size()));
  }
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    for (int j = 0; j < per_image; ++j) {
      const RefExpression& e = expressions[s * per_image + j];
      const std::string at = "expression " + std::to_string(e.expression_id);
      if (e.expression_id != static_cast<int>(s * per_image + j)) fail(at + ": id out of order");
      if (e.scene_id != scenes[s].index) fail(at + ": belongs to the wrong scene");
      if (e.trace.size() != e.program.size()) fail(at + ": trace length differs from program");
      const bool fp = mode == DatasetMode::kFalsePremise;
      if (e.is_false_premise != fp) fail(at + ": false-premise flag does not match the mode");
      if (fp != e.referred_ids().empty()) {
        fail(at + (fp ? ": false-premise referent set is not empty" : ": refers to nothing"));
      }
    }
  }
}

DatasetManifest generate_dataset(std::vector<SceneGraph> scenes, int per_image,
                                 const TemplateCatalog& catalog, std::uint64_t seed,
                                 const GenerationOptions& options, DatasetMode mode,
                                 int threads) {
  if (per_image < 1) throw Error(ErrorCode::kConfig, "per_image must be >= 1");
  options.validate();
  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.per_image = per_image;
  manifest.mode = mode;
  manifest.expressions.resize(scenes.size() * per_image);

  const std::uint64_t stream_base = Rng::derive_seed(seed, kExpressionStream);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(scenes.size());

  auto work = [&] {
    for (std::size_t s = next++; s < scenes.size(); s = next++) {
      try {
        const SceneGraph& scene = scenes[s];
        const RenderResult render = rasterize(scene);
        Rng rng(Rng::derive_seed(stream_base, static_cast<std::uint64_t>(scene.index)));
        for (int j = 0; j < per_image; ++j) {
          RefExpression e = mode == DatasetMode::kReferring
                                ? sample_expression(scene, render, catalog, options, rng)
                                : generate_false_premise(scene, render, catalog, options, rng);
          e.expression_id = static_cast<int>(s * per_image + j);
          manifest.expressions[s * per_image + j] = std::move(e);
        }
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };

  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, std::max(1, static_cast<int>(scenes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  // Report the failure of the earliest scene so the error is deterministic.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  manifest.scenes = std::move(scenes);
  return manifest;
}

}  // namespace refgen
