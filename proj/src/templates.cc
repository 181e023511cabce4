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

#include "refgen/templates.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "refgen/errors.h"

#ifndef REFGEN_TEMPLATE_DIR
#define REFGEN_TEMPLATE_DIR "data/templates"
#endif

namespace refgen {
namespace {

constexpr std::array<std::string_view, 7> kCategoryNames = {
    "zero_relate", "one_relate", "two_relate", "three_relate",
    "and_logic",   "or_logic",   "same_relate"};

std::optional<SkeletonOp> parse_op(std::string_view name) {
  static const std::map<std::string_view, SkeletonOp> kOps = {
      {"scene", SkeletonOp::kScene}, {"describe", SkeletonOp::kDescribe},
      {"unique", SkeletonOp::kUnique}, {"relate", SkeletonOp::kRelate},
      {"same", SkeletonOp::kSame},   {"and", SkeletonOp::kAnd},
      {"or", SkeletonOp::kOr}};
  auto it = kOps.find(name);
  if (it == kOps.end()) return std::nullopt;
  return it->second;
}

int op_arity(SkeletonOp op) {
  switch (op) {
    case SkeletonOp::kScene: return 0;
    case SkeletonOp::kAnd:
    case SkeletonOp::kOr: return 2;
    default: return 1;
  }
}

char slot_prefix(SkeletonOp op) {
  switch (op) {
    case SkeletonOp::kDescribe: return 'D';
    case SkeletonOp::kRelate: return 'R';
    case SkeletonOp::kSame: return 'A';
    default: return 0;
  }
}

template <typename T>
const T& pick_form(std::span<const T> forms, Rng& rng, SynonymPolicy policy) {
  return policy == SynonymPolicy::kCanonical ? forms.front() : rng.pick(forms);
}

std::string noun_with_form(std::string_view noun, NounForm form) {
  switch (form) {
    case NounForm::kPlural: return std::string(noun) + "s";
    case NounForm::kOptionalPlural: return std::string(noun) + "(s)";
    case NounForm::kSingular: return std::string(noun);
  }
  return std::string(noun);
}

std::string core_phrase(const Description& d, NounForm form, Rng& rng,
                        SynonymPolicy policy) {
  std::string out;
  for (AttributeKind k : {AttributeKind::kSize, AttributeKind::kColor,
                          AttributeKind::kMaterial}) {
    if (auto v = d.filter(k)) {
      out += pick_form(synonyms(k, *v), rng, policy);
      out += ' ';
    }
  }
  std::string_view noun =
      d.filter(AttributeKind::kShape)
          ? pick_form(synonyms(AttributeKind::kShape, *d.filter(AttributeKind::kShape)), rng,
                      policy)
          : pick_form(generic_nouns(), rng, policy);
  return out + noun_with_form(noun, form);
}

[[noreturn]] void fail(const std::string& family, const std::string& what) {
  throw Error(ErrorCode::kTemplate, "family '" + family + "': " + what);
}

}  // namespace

std::string_view category_name(Category c) { return kCategoryNames[static_cast<int>(c)]; }

std::optional<Category> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

TextTemplate parse_text_template(std::string_view text) {
  TextTemplate out;
  out.source = std::string(text);
  std::string literal;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      if (text[i] == '}') throw Error(ErrorCode::kTemplate, "stray '}' in \"" + out.source + "\"");
      literal.push_back(text[i++]);
      continue;
    }
    const std::size_t close = text.find('}', i);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kTemplate, "unclosed placeholder in \"" + out.source + "\"");
    }
    if (!literal.empty()) {
      out.pieces.push_back(TextPiece{literal, "", NounForm::kPlural});
      literal.clear();
    }
    std::string_view body = text.substr(i + 1, close - i - 1);
    TextPiece piece;
    const std::size_t colon = body.find(':');
    piece.slot = std::string(body.substr(0, colon));
    if (piece.slot.size() < 2 || std::string_view("DRA").find(piece.slot[0]) == std::string_view::npos) {
      throw Error(ErrorCode::kTemplate, "bad slot '" + piece.slot + "' in \"" + out.source + "\"");
    }
    if (colon != std::string_view::npos) {
      std::string_view form = body.substr(colon + 1);
      if (piece.slot[0] != 'D') {
        throw Error(ErrorCode::kTemplate, "only D slots take a noun form: \"" + out.source + "\"");
      }
      if (form == "pl") {
        piece.form = NounForm::kPlural;
      } else if (form == "opt") {
        piece.form = NounForm::kOptionalPlural;
      } else if (form == "sg") {
        piece.form = NounForm::kSingular;
      } else {
        throw Error(ErrorCode::kTemplate, "unknown noun form '" + std::string(form) + "'");
      }
    }
    out.pieces.push_back(std::move(piece));
    i = close + 1;
  }
  if (!literal.empty()) out.pieces.push_back(TextPiece{literal, "", NounForm::kPlural});
  return out;
}

std::vector<std::string> TemplateFamily::slots() const {
  std::vector<std::string> out;
  for (const SkeletonNode& n : skeleton) {
    if (!n.slot.empty()) out.push_back(n.slot);
  }
  return out;
}

void TemplateFamily::validate() const {
  if (skeleton.empty()) fail(name, "empty program skeleton");
  if (texts.size() < 2) fail(name, "needs at least two text templates");
  std::set<std::string> seen;
  std::vector<int> consumers(skeleton.size(), 0);
  int relates = 0, ands = 0, ors = 0, sames = 0;
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const SkeletonNode& n = skeleton[i];
    const std::string at = "node " + std::to_string(i);
    if (static_cast<int>(n.inputs.size()) != op_arity(n.op)) fail(name, at + ": wrong input count");
    for (int in : n.inputs) {
      if (in < 0 || in >= static_cast<int>(i)) fail(name, at + ": input must reference an earlier node");
      ++consumers[in];
    }
    const char prefix = slot_prefix(n.op);
    if (prefix == 0) {
      if (!n.slot.empty()) fail(name, at + ": op takes no slot");
    } else {
      if (n.slot.size() < 2 || n.slot[0] != prefix) {
        fail(name, at + ": slot must start with '" + std::string(1, prefix) + "'");
      }
      if (!seen.insert(n.slot).second) fail(name, "duplicate slot " + n.slot);
    }
    if (n.op == SkeletonOp::kRelate || n.op == SkeletonOp::kSame) {
      if (skeleton[n.inputs[0]].op != SkeletonOp::kUnique) {
        fail(name, at + ": relate/same must consume a unique node");
      }
    }
    if (n.op == SkeletonOp::kUnique && skeleton[n.inputs[0]].op != SkeletonOp::kDescribe) {
      fail(name, at + ": unique must consume a describe node");
    }
    if (n.op == SkeletonOp::kDescribe && (n.min_filters < 0 || n.min_filters > 4)) {
      fail(name, at + ": min_filters out of range");
    }
    relates += n.op == SkeletonOp::kRelate;
    ands += n.op == SkeletonOp::kAnd;
    ors += n.op == SkeletonOp::kOr;
    sames += n.op == SkeletonOp::kSame;
  }
  for (std::size_t i = 0; i + 1 < skeleton.size(); ++i) {
    if (consumers[i] == 0) fail(name, "node " + std::to_string(i) + " does not feed the root");
  }
  const SkeletonOp root = skeleton.back().op;
  if (root != SkeletonOp::kDescribe && root != SkeletonOp::kAnd && root != SkeletonOp::kOr) {
    fail(name, "root must be a describe, and, or or node");
  }
  for (auto [a, b] : distinct) {
    if (a < 0 || b < 0 || a >= static_cast<int>(skeleton.size()) ||
        b >= static_cast<int>(skeleton.size()) || a == b) {
      fail(name, "bad distinct pair");
    }
  }

  bool consistent = false;
  const bool plain = ands == 0 && ors == 0 && sames == 0;
  switch (category) {
    case Category::kZeroRelate: consistent = plain && relates == 0; break;
    case Category::kOneRelate: consistent = plain && relates == 1; break;
    case Category::kTwoRelate: consistent = plain && relates == 2; break;
    case Category::kThreeRelate: consistent = plain && relates == 3; break;
    case Category::kAndLogic: consistent = ands > 0 && ors == 0 && sames == 0; break;
    case Category::kOrLogic: consistent = ors > 0 && ands == 0 && sames == 0; break;
    case Category::kSameRelate: consistent = sames > 0 && ands == 0 && ors == 0; break;
  }
  if (!consistent) {
    fail(name, "skeleton does not match category " + std::string(category_name(category)));
  }

  for (const TextTemplate& t : texts) {
    std::set<std::string> used;
    for (const TextPiece& p : t.pieces) {
      if (p.slot.empty()) continue;
      if (!seen.count(p.slot)) fail(name, "text uses unknown slot " + p.slot + ": \"" + t.source + "\"");
      used.insert(p.slot);
    }
    if (used != seen) fail(name, "text does not use every slot: \"" + t.source + "\"");
  }
}

TemplateFamily parse_family(const nlohmann::json& doc) {
  TemplateFamily f;
  try {
    f.name = doc.at("family").get<std::string>();
    const std::string category = doc.at("category").get<std::string>();
    auto c = parse_category(category);
    if (!c) fail(f.name, "unknown category '" + category + "'");
    f.category = *c;
    for (const auto& node : doc.at("program")) {
      SkeletonNode n;
      const std::string op = node.at("op").get<std::string>();
      auto parsed = parse_op(op);
      if (!parsed) fail(f.name, "unknown op '" + op + "'");
      n.op = *parsed;
      n.slot = node.value("slot", std::string());
      n.inputs = node.value("inputs", std::vector<int>());
      n.min_filters = node.value("min_filters", 0);
      if (node.contains("attribute")) {
        const std::string a = node["attribute"].get<std::string>();
        n.attribute = parse_attribute_kind(a);
        if (!n.attribute) fail(f.name, "unknown attribute '" + a + "'");
      }
      f.skeleton.push_back(std::move(n));
    }
    for (const auto& pair : doc.value("distinct", nlohmann::json::array())) {
      f.distinct.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    for (const auto& text : doc.at("texts")) {
      f.texts.push_back(parse_text_template(text.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTemplate, "family '" + f.name + "': " + e.what());
  }
  f.validate();
  return f;
}

TemplateCatalog::TemplateCatalog(std::vector<TemplateFamily> families)
    : families_(std::move(families)) {
  std::set<std::string> names;
  for (const TemplateFamily& f : families_) {
    f.validate();
    if (!names.insert(f.name).second) {
      throw Error(ErrorCode::kTemplate, "duplicate family name '" + f.name + "'");
    }
  }
  // Median over the categories that have at least one family.
  std::vector<int> counts;
  for (Category c : kCategories) {
    if (family_count(c) > 0) counts.push_back(family_count(c));
  }
  double median = 0.0;
  if (!counts.empty()) {
    std::sort(counts.begin(), counts.end());
    const std::size_t m = counts.size() / 2;
    median = counts.size() % 2 ? counts[m] : (counts[m - 1] + counts[m]) / 2.0;
  }
  for (const TemplateFamily& f : families_) {
    weights_.push_back(family_count(f.category) < median ? 2.0 : 1.0);
  }
}

TemplateCatalog TemplateCatalog::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kTemplate, "template directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<TemplateFamily> families;
  for (const auto& path : files) {
    std::ifstream in(path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kTemplate, path.string() + ": " + e.what());
    }
    families.push_back(parse_family(doc));
  }
  return TemplateCatalog(std::move(families));
}

std::filesystem::path default_template_dir() { return REFGEN_TEMPLATE_DIR; }

TemplateCatalog TemplateCatalog::load_default() {
  return from_directory(default_template_dir());
}

const TemplateFamily* TemplateCatalog::find(std::string_view name) const {
  for (const TemplateFamily& f : families_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void TemplateCatalog::set_weight(std::string_view family, double weight) {
  if (!(weight >= 0.0)) {
    throw Error(ErrorCode::kConfig, "weight of family '" + std::string(family) + "' must be >= 0");
  }
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (families_[i].name == family) {
      weights_[i] = weight;
      return;
    }
  }
  throw Error(ErrorCode::kConfig, "no template family named '" + std::string(family) + "'");
}

int TemplateCatalog::family_count(Category c) const {
  return static_cast<int>(std::count_if(families_.begin(), families_.end(),
                                        [c](const TemplateFamily& f) { return f.category == c; }));
}

double TemplateCatalog::category_probability(Category c) const {
  double total = 0.0;
  double in = 0.0;
  for (std::size_t i = 0; i < families_.size(); ++i) {
    total += weights_[i];
    if (families_[i].category == c) in += weights_[i];
  }
  return total > 0.0 ? in / total : 0.0;
}

int Description::filter_count() const {
  return static_cast<int>(std::count_if(filters.begin(), filters.end(),
                                        [](const auto& f) { return f.has_value(); }));
}

std::string ordinal_word(int rank) {
  static const std::array<std::string_view, 10> kWords = {
      "first", "second", "third",   "fourth", "fifth",
      "sixth", "seventh", "eighth", "ninth",  "tenth"};
  if (rank >= 1 && rank <= 10) return std::string(kWords[rank - 1]);
  const int mod100 = rank % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (rank % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(rank) + suffix;
}

std::string realize_description(const Description& d, NounForm form, Rng& rng,
                                SynonymPolicy policy) {
  switch (d.decoration.kind) {
    case Decoration::Kind::kNone:
      return core_phrase(d, form, rng, policy);
    case Decoration::Kind::kVisible:
      return std::string(d.decoration.flag == Visibility::kFullyVisible ? "fully visible "
                                                                        : "partially visible ") +
             core_phrase(d, form, rng, policy);
    case Decoration::Kind::kOrdinal: {
      // The ordered set is a group of objects even when the phrase as a whole
      // names one thing.
      const NounForm inner = form == NounForm::kSingular ? NounForm::kOptionalPlural : form;
      return ordinal_word(d.decoration.rank) + " one of the " +
             core_phrase(d, inner, rng, policy) + " from " +
             std::string(direction_name(d.decoration.direction));
    }
  }
  return {};
}

std::string realize_relation(Direction d, Rng& rng, SynonymPolicy policy) {
  static const std::map<Direction, std::vector<std::string_view>> kPhrases = {
      {Direction::kLeft, {"to the left of", "left of", "on the left side of"}},
      {Direction::kRight, {"to the right of", "right of", "on the right side of"}},
      {Direction::kFront, {"in front of"}},
      {Direction::kBehind, {"behind"}},
  };
  const auto& forms = kPhrases.at(d);
  return std::string(pick_form(std::span<const std::string_view>(forms), rng, policy));
}

std::string realize_text(const SlotBindings& bindings, const TextTemplate& text, Rng& rng,
                         SynonymPolicy policy) {
  std::string out;
  for (const TextPiece& p : text.pieces) {
    if (p.slot.empty()) {
      out += p.literal;
      continue;
    }
    switch (p.slot[0]) {
      case 'D': {
        auto it = bindings.descriptions.find(p.slot);
        if (it == bindings.descriptions.end()) {
          throw Error(ErrorCode::kTemplate, "no binding for " + p.slot + " in \"" + text.source + "\"");
        }
        out += realize_description(it->second, p.form, rng, policy);
        break;
      }
      case 'R': {
        auto it = bindings.relations.find(p.slot);
        if (it == bindings.relations.end()) {
          throw Error(ErrorCode::kTemplate, "no binding for " + p.slot + " in \"" + text.source + "\"");
        }
        out += realize_relation(it->second, rng, policy);
        break;
      }
      case 'A': {
        auto it = bindings.attributes.find(p.slot);
        if (it == bindings.attributes.end()) {
          throw Error(ErrorCode::kTemplate, "no binding for " + p.slot + " in \"" + text.source + "\"");
        }
        out += attribute_kind_name(it->second);
        break;
      }
      default:
        throw Error(ErrorCode::kTemplate, "bad slot " + p.slot);
    }
  }
  return out;
}

}  // namespace refgen
