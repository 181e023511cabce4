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

#include "refgen/eval.h"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "refgen/errors.h"

namespace refgen {
namespace {

struct ModuleProbe {
  const char* name;
  Function function;
};

constexpr ModuleProbe kZeroRelateModules[] = {
    {"color", Function::kFilterColor},   {"size", Function::kFilterSize},
    {"shape", Function::kFilterShape},   {"material", Function::kFilterMaterial},
    {"ordinal", Function::kOrdinal},     {"visible", Function::kVisible},
};

// (axis, key) pairs an expression contributes to.
std::vector<std::pair<std::string, std::string>> slice_keys(const RefExpression& e,
                                                            const SceneGraph& scene) {
  std::vector<std::pair<std::string, std::string>> keys;
  keys.emplace_back("category", std::string(category_name(e.category)));
  keys.emplace_back("object_count", std::to_string(scene.size()));
  switch (e.category) {
    case Category::kZeroRelate:
      for (const ModuleProbe& m : kZeroRelateModules) {
        keys.emplace_back("zero_relate_module",
                          std::string(m.name) +
                              (e.program.contains(m.function) ? "/include" : "/exclude"));
      }
      keys.emplace_back("relation_depth", "0");
      break;
    case Category::kOneRelate:
      keys.emplace_back("relation_depth", "1");
      break;
    case Category::kTwoRelate:
      keys.emplace_back("relation_depth", "2");
      keys.emplace_back("topology", "chain");
      keys.emplace_back("relation_type", "spatial");
      break;
    case Category::kThreeRelate:
      keys.emplace_back("relation_depth", "3");
      break;
    case Category::kAndLogic:
      keys.emplace_back("topology", "tree");
      break;
    case Category::kSameRelate:
      keys.emplace_back("relation_type", "same");
      break;
    case Category::kOrLogic:
      break;
  }
  return keys;
}

std::string pixel_bin(std::int64_t n) {
  if (n == 0) return "0";
  if (n <= 8) return "1-8";
  if (n <= 64) return "9-64";
  if (n <= 512) return "65-512";
  return ">512";
}

std::map<int, const Prediction*> index_predictions(const std::vector<Prediction>& predictions,
                                                   const GroundTruth& truth) {
  std::map<int, const Prediction*> out;
  const int n = static_cast<int>(truth.manifest().expressions.size());
  for (const Prediction& p : predictions) {
    if (p.expression_id < 0 || p.expression_id >= n) {
      throw Error(ErrorCode::kPrediction,
                  "prediction for unknown expression " + std::to_string(p.expression_id));
    }
    if (!out.emplace(p.expression_id, &p).second) {
      throw Error(ErrorCode::kPrediction,
                  "duplicate prediction for expression " + std::to_string(p.expression_id));
    }
  }
  return out;
}

const RefExpression& expression_by_id(const GroundTruth& truth, int id) {
  const RefExpression& e = truth.manifest().expressions[id];
  if (e.expression_id != id) {
    throw Error(ErrorCode::kFormat, "expression ids are not dense");
  }
  return e;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

nlohmann::json aggregate_json(const Aggregate& a, Track track) {
  nlohmann::json j = {{"count", a.count}};
  if (track == Track::kSegmentation) {
    j["cumulative_iou"] = a.cumulative_iou();
    j["mean_iou"] = a.mean_iou();
    j["intersection"] = a.intersection;
    j["union"] = a.union_pixels;
  } else {
    j["accuracy"] = a.accuracy();
    j["correct"] = a.correct;
  }
  return j;
}

std::string aggregate_row(const std::string& key, const Aggregate& a, Track track) {
  std::ostringstream os;
  os << "  " << std::left << std::setw(22) << key << std::right << std::setw(8) << a.count;
  if (track == Track::kSegmentation) {
    os << std::setw(12) << fixed(a.cumulative_iou()) << std::setw(12) << fixed(a.mean_iou());
  } else {
    os << std::setw(12) << fixed(a.accuracy());
  }
  return os.str();
}

}  // namespace

double iou(const Mask& pred, const Mask& gt) {
  const std::int64_t u = pred.union_count(gt);
  if (u == 0) return 1.0;
  return static_cast<double>(pred.intersection_count(gt)) / static_cast<double>(u);
}

GroundTruth::GroundTruth(const DatasetManifest& manifest, int threads) : manifest_(manifest) {
  const std::size_t n = manifest.scenes.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!scene_position_.emplace(manifest.scenes[i].index, static_cast<int>(i)).second) {
      throw Error(ErrorCode::kFormat,
                  "duplicate scene index " + std::to_string(manifest.scenes[i].index));
    }
  }
  renders_.resize(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) renders_[i] = rasterize(manifest.scenes[i]);
  };
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  t = std::clamp(t, 1, std::max(1, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int k = 1; k < t; ++k) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
}

int GroundTruth::position_of(const RefExpression& e) const {
  auto it = scene_position_.find(e.scene_id);
  if (it == scene_position_.end()) {
    throw Error(ErrorCode::kFormat, "expression " + std::to_string(e.expression_id) +
                                        " names unknown scene " + std::to_string(e.scene_id));
  }
  return it->second;
}

const RenderResult& GroundTruth::render_of(const RefExpression& e) const {
  return renders_[position_of(e)];
}

const SceneGraph& GroundTruth::scene_of(const RefExpression& e) const {
  return manifest_.scenes[position_of(e)];
}

Mask GroundTruth::final_mask(const RefExpression& e) const {
  return render_of(e).visible_union(e.referred_ids());
}

Mask GroundTruth::step_mask(const RefExpression& e, int node) const {
  return render_of(e).visible_union(e.trace.steps.at(node));
}

void Aggregate::add_segmentation(std::int64_t inter, std::int64_t uni) {
  ++count;
  intersection += inter;
  union_pixels += uni;
  iou_sum += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void Aggregate::add_detection(bool hit) {
  ++count;
  correct += hit ? 1 : 0;
}

double Aggregate::cumulative_iou() const {
  return union_pixels == 0 ? 1.0
                           : static_cast<double>(intersection) / static_cast<double>(union_pixels);
}

double Aggregate::mean_iou() const { return count == 0 ? 0.0 : iou_sum / count; }

double Aggregate::accuracy() const {
  return count == 0 ? 0.0 : static_cast<double>(correct) / count;
}

EvalReport score_segmentation(const std::vector<Prediction>& predictions,
                              const GroundTruth& truth) {
  const auto by_id = index_predictions(predictions, truth);
  EvalReport report;
  report.track = Track::kSegmentation;
  for (const RefExpression& e : truth.manifest().expressions) {
    auto it = by_id.find(e.expression_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kPrediction,
                  "no prediction for expression " + std::to_string(e.expression_id));
    }
    const Prediction& p = *it->second;
    if (!p.mask) {
      throw Error(ErrorCode::kPrediction,
                  "expression " + std::to_string(e.expression_id) + ": no mask in record");
    }
    const Mask gt = truth.final_mask(e);
    const std::int64_t inter = p.mask->intersection_count(gt);
    const std::int64_t uni = p.mask->union_count(gt);
    report.overall.add_segmentation(inter, uni);
    for (const auto& [axis, key] : slice_keys(e, truth.scene_of(e))) {
      report.slices[axis][key].add_segmentation(inter, uni);
    }
    if (e.is_false_premise) {
      const std::int64_t fg = p.mask->count();
      ++report.false_premise_count;
      report.false_premise_zero += fg == 0 ? 1 : 0;
      ++report.false_premise_histogram[pixel_bin(fg)];
    }
  }
  return report;
}

EvalReport score_detection(const std::vector<Prediction>& predictions,
                           const GroundTruth& truth) {
  const auto by_id = index_predictions(predictions, truth);
  for (const auto& [id, p] : by_id) {
    const RefExpression& e = expression_by_id(truth, id);
    if (!e.is_single_object()) {
      throw Error(ErrorCode::kPrediction,
                  "expression " + std::to_string(id) + " refers to " +
                      std::to_string(e.referred_ids().size()) +
                      " objects; detection scores single-object expressions only");
    }
    if (!p->candidate_id) {
      throw Error(ErrorCode::kPrediction,
                  "expression " + std::to_string(id) + ": no candidate_id in record");
    }
    if (!truth.scene_of(e).has_object(*p->candidate_id)) {
      throw Error(ErrorCode::kPrediction, "expression " + std::to_string(id) +
                                              ": candidate " +
                                              std::to_string(*p->candidate_id) +
                                              " is not an object of the scene");
    }
  }
  EvalReport report;
  report.track = Track::kDetection;
  for (const RefExpression& e : truth.manifest().expressions) {
    if (!e.is_single_object()) continue;
    auto it = by_id.find(e.expression_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kPrediction,
                  "no prediction for expression " + std::to_string(e.expression_id));
    }
    const bool hit = *it->second->candidate_id == e.referred_ids().first();
    report.overall.add_detection(hit);
    for (const auto& [axis, key] : slice_keys(e, truth.scene_of(e))) {
      report.slices[axis][key].add_detection(hit);
    }
  }
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["track"] = track == Track::kSegmentation ? "segmentation" : "detection";
  j["overall"] = aggregate_json(overall, track);
  j["slices"] = nlohmann::json::object();
  for (const auto& [axis, keys] : slices) {
    for (const auto& [key, agg] : keys) j["slices"][axis][key] = aggregate_json(agg, track);
  }
  if (track == Track::kSegmentation && false_premise_count > 0) {
    j["false_premise"] = {
        {"count", false_premise_count},
        {"zero_foreground", false_premise_zero},
        {"zero_foreground_fraction",
         static_cast<double>(false_premise_zero) / false_premise_count},
        {"foreground_pixel_histogram", false_premise_histogram}};
  }
  return j;
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  const bool seg = track == Track::kSegmentation;
  os << (seg ? "Segmentation" : "Detection") << " report\n";
  os << "  " << std::left << std::setw(22) << "slice" << std::right << std::setw(8) << "n";
  if (seg) {
    os << std::setw(12) << "cum_iou" << std::setw(12) << "mean_iou";
  } else {
    os << std::setw(12) << "accuracy";
  }
  os << "\n" << aggregate_row("overall", overall, track) << "\n";
  for (const auto& [axis, keys] : slices) {
    os << axis << "\n";
    for (const auto& [key, agg] : keys) os << aggregate_row(key, agg, track) << "\n";
  }
  if (seg && false_premise_count > 0) {
    os << "false_premise foreground pixels (" << false_premise_count << " expressions, "
       << fixed(static_cast<double>(false_premise_zero) / false_premise_count)
       << " with none)\n";
    for (const auto& [bin, n] : false_premise_histogram) {
      os << "  " << std::left << std::setw(22) << bin << std::right << std::setw(8) << n << "\n";
    }
  }
  return os.str();
}

StepReport stepwise_iou(const std::vector<Prediction>& predictions, const GroundTruth& truth) {
  StepReport report;
  for (const Prediction& p : predictions) {
    const int n = static_cast<int>(truth.manifest().expressions.size());
    if (p.expression_id < 0 || p.expression_id >= n) {
      throw Error(ErrorCode::kPrediction,
                  "prediction for unknown expression " + std::to_string(p.expression_id));
    }
    const RefExpression& e = expression_by_id(truth, p.expression_id);
    if (static_cast<int>(p.step_masks.size()) != e.program.size()) {
      throw Error(ErrorCode::kPrediction,
                  "expression " + std::to_string(e.expression_id) + ": " +
                      std::to_string(p.step_masks.size()) + " step masks for " +
                      std::to_string(e.program.size()) + " program nodes");
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> node_iou;
    for (int i = 0; i < e.program.size(); ++i) {
      const Mask gt = truth.step_mask(e, i);
      node_iou.emplace_back(p.step_masks[i].intersection_count(gt),
                            p.step_masks[i].union_count(gt));
    }
    for (int i = 0; i < e.program.size(); ++i) {
      const ProgramNode& node = e.program.node(i);
      StepStat& stat = report.modules[std::string(function_name(node.function))];
      stat.out.add_segmentation(node_iou[i].first, node_iou[i].second);
      for (int in : node.inputs) stat.in.add_segmentation(node_iou[in].first, node_iou[in].second);
    }
  }
  return report;
}

nlohmann::json StepReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, stat] : modules) {
    j[name] = {{"out_count", stat.out.count},
               {"out_iou", stat.out.mean_iou()},
               {"in_count", stat.in.count},
               {"in_iou", stat.in.count ? nlohmann::json(stat.in.mean_iou()) : nlohmann::json()}};
  }
  return j;
}

std::string StepReport::to_table() const {
  std::ostringstream os;
  os << "  " << std::left << std::setw(18) << "module" << std::right << std::setw(8) << "n"
     << std::setw(10) << "in_iou" << std::setw(10) << "out_iou" << "\n";
  for (const auto& [name, stat] : modules) {
    os << "  " << std::left << std::setw(18) << name << std::right << std::setw(8)
       << stat.out.count << std::setw(10) << (stat.in.count ? fixed(stat.in.mean_iou()) : "-")
       << std::setw(10) << fixed(stat.out.mean_iou()) << "\n";
  }
  return os.str();
}

std::vector<int> frequent_candidate_choices(const GroundTruth& truth) {
  // referred[k][v] / present[k][v]: how often an object with value v of kind
  // k ends up as the referent when it is in the scene.
  std::array<std::array<double, 8>, 4> referred{};
  std::array<std::array<double, 8>, 4> present{};
  const auto& expressions = truth.manifest().expressions;
  for (const RefExpression& e : expressions) {
    if (!e.is_single_object()) continue;
    const SceneGraph& scene = truth.scene_of(e);
    for (const ObjectSpec& o : scene.objects) {
      for (AttributeKind k : kAttributeKinds) {
        present[static_cast<int>(k)][o.attributes.get(k)] += 1.0;
      }
    }
    const ObjectSpec& r = scene.objects[e.referred_ids().first()];
    for (AttributeKind k : kAttributeKinds) {
      referred[static_cast<int>(k)][r.attributes.get(k)] += 1.0;
    }
  }
  std::vector<int> choices;
  for (const RefExpression& e : expressions) {
    if (!e.is_single_object()) {
      choices.push_back(-1);
      continue;
    }
    const SceneGraph& scene = truth.scene_of(e);
    int best = 0;
    double best_score = -1.0;
    for (const ObjectSpec& o : scene.objects) {
      double score = 1.0;
      for (AttributeKind k : kAttributeKinds) {
        const int ki = static_cast<int>(k);
        const int v = o.attributes.get(k);
        score *= present[ki][v] > 0.0 ? referred[ki][v] / present[ki][v] : 0.0;
      }
      if (score > best_score) {
        best_score = score;
        best = o.id;
      }
    }
    choices.push_back(best);
  }
  return choices;
}

BiasReport bias_audit(const GroundTruth& truth) {
  BiasReport report;
  const auto& expressions = truth.manifest().expressions;
  report.expressions = static_cast<int>(expressions.size());

  std::map<std::string, std::map<std::string, double>> referred_counts;
  std::map<std::string, std::map<std::string, double>> overall_counts;
  double referred_total = 0.0;
  double overall_total = 0.0;
  for (AttributeKind k : kAttributeKinds) {
    for (int v = 0; v < value_count(k); ++v) {
      referred_counts[std::string(attribute_kind_name(k))][std::string(canonical_name(k, v))] = 0;
      overall_counts[std::string(attribute_kind_name(k))][std::string(canonical_name(k, v))] = 0;
    }
  }

  // Coverage count of every pixel over referring expressions, for the
  // constant-mask baseline.
  std::vector<std::int64_t> coverage;
  std::int64_t gt_total = 0;
  std::int64_t referring = 0;

  const std::vector<int> frequent = frequent_candidate_choices(truth);
  int frequent_hits = 0;
  int largest_hits = 0;
  double uniform_sum = 0.0;

  for (std::size_t idx = 0; idx < expressions.size(); ++idx) {
    const RefExpression& e = expressions[idx];
    const SceneGraph& scene = truth.scene_of(e);
    const RenderResult& render = truth.render_of(e);
    ++report.referred_set_sizes[e.referred_ids().size()];
    for (const ObjectSpec& o : scene.objects) {
      const bool is_referred = e.referred_ids().contains(o.id);
      for (AttributeKind k : kAttributeKinds) {
        const std::string kind(attribute_kind_name(k));
        const std::string value(canonical_name(k, o.attributes.get(k)));
        overall_counts[kind][value] += 1.0;
        if (is_referred) referred_counts[kind][value] += 1.0;
      }
      overall_total += 1.0;
      referred_total += is_referred ? 1.0 : 0.0;
    }

    if (!e.is_false_premise) {
      const Mask gt = truth.final_mask(e);
      if (coverage.empty()) coverage.assign(gt.pixel_count(), 0);
      if (static_cast<std::int64_t>(coverage.size()) != gt.pixel_count()) {
        throw Error(ErrorCode::kDimensionMismatch, "scenes differ in resolution");
      }
      for (std::int64_t p = 0; p < gt.pixel_count(); ++p) coverage[p] += gt.get_index(p);
      gt_total += gt.count();
      ++referring;
    }

    if (e.is_single_object()) {
      ++report.single_object_expressions;
      const int target = e.referred_ids().first();
      frequent_hits += frequent[idx] == target ? 1 : 0;
      int largest = 0;
      std::int64_t largest_area = -1;
      for (const ObjectSpec& o : scene.objects) {
        const std::int64_t area = render.objects[o.id].visible_mask.count();
        if (area > largest_area) {
          largest_area = area;
          largest = o.id;
        }
      }
      largest_hits += largest == target ? 1 : 0;
      uniform_sum += 1.0 / scene.size();
    }
  }

  for (const auto& [kind, values] : overall_counts) {
    for (const auto& [value, n] : values) {
      AttributeMarginal& m = report.marginals[kind][value];
      m.overall = overall_total > 0 ? n / overall_total : 0.0;
      m.referred = referred_total > 0 ? referred_counts[kind][value] / referred_total : 0.0;
    }
  }

  // The best constant mask takes the pixels of highest coverage first: the
  // ratio Σc / (G + Σ(N - c)) is maximized by a prefix of that order.
  std::sort(coverage.begin(), coverage.end(), std::greater<>());
  double best = gt_total == 0 ? 1.0 : 0.0;
  std::int64_t best_pixels = 0;
  std::int64_t inter = 0;
  std::int64_t extra = 0;
  for (std::size_t p = 0; p < coverage.size() && coverage[p] > 0; ++p) {
    inter += coverage[p];
    extra += referring - coverage[p];
    const double ratio = static_cast<double>(inter) / static_cast<double>(gt_total + extra);
    if (ratio > best) {
      best = ratio;
      best_pixels = static_cast<std::int64_t>(p) + 1;
    }
  }
  report.constant_mask_cumulative_iou = best;
  report.constant_mask_pixels = best_pixels;

  if (report.single_object_expressions > 0) {
    const double n = report.single_object_expressions;
    report.frequent_candidate_accuracy = frequent_hits / n;
    report.largest_mask_accuracy = largest_hits / n;
    report.uniform_random_accuracy = uniform_sum / n;
  }
  return report;
}

nlohmann::json BiasReport::to_json() const {
  nlohmann::json j;
  j["expressions"] = expressions;
  nlohmann::json sizes = nlohmann::json::object();
  for (const auto& [k, n] : referred_set_sizes) sizes[std::to_string(k)] = n;
  j["referred_set_sizes"] = sizes;
  for (const auto& [kind, values] : marginals) {
    for (const auto& [value, m] : values) {
      j["attribute_marginals"][kind][value] = {{"referred", m.referred}, {"overall", m.overall}};
    }
  }
  j["expression_blind_baselines"] = {
      {"constant_mask_cumulative_iou", constant_mask_cumulative_iou},
      {"constant_mask_pixels", constant_mask_pixels},
      {"single_object_expressions", single_object_expressions},
      {"frequent_candidate_accuracy", frequent_candidate_accuracy},
      {"largest_mask_accuracy", largest_mask_accuracy},
      {"uniform_random_accuracy", uniform_random_accuracy}};
  return j;
}

std::string BiasReport::to_table() const {
  std::ostringstream os;
  os << "Bias audit over " << expressions << " expressions\n";
  os << "referred set size\n";
  for (const auto& [k, n] : referred_set_sizes) {
    os << "  " << std::left << std::setw(10) << k << std::right << std::setw(8) << n << "\n";
  }
  os << "attribute marginals (referred vs all objects)\n";
  for (const auto& [kind, values] : marginals) {
    for (const auto& [value, m] : values) {
      os << "  " << std::left << std::setw(20) << (kind + "=" + value) << std::right
         << std::setw(10) << fixed(m.referred) << std::setw(10) << fixed(m.overall) << "\n";
    }
  }
  os << "expression-blind baselines\n"
     << "  constant mask cumulative IoU   " << fixed(constant_mask_cumulative_iou) << " ("
     << constant_mask_pixels << " px)\n"
     << "  frequent-attribute detection   " << fixed(frequent_candidate_accuracy) << "\n"
     << "  largest-mask detection         " << fixed(largest_mask_accuracy) << "\n"
     << "  uniform random detection       " << fixed(uniform_random_accuracy) << "\n";
  return os.str();
}

}  // namespace refgen
