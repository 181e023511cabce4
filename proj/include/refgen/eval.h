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

// Scoring of externally produced predictions against a generated dataset.
//
// Slice axes of a report:
//   category          the seven expression categories
//   zero_relate_module  "<module>/include" and "<module>/exclude" over the
//                     zero_relate subset, for color, size, shape, material,
//                     ordinal and visible
//   relation_depth    0..3 over the zero..three_relate categories
//   topology          chain (two_relate) against tree (and_logic)
//   relation_type     spatial (two_relate) against same (same_relate)
//   object_count      number of objects in the scene

#ifndef REFGEN_EVAL_H_
#define REFGEN_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "refgen/generator.h"
#include "refgen/mask.h"
#include "refgen/render.h"

namespace refgen {

// |pred ∩ gt| / |pred ∪ gt|; 1 when both are empty. Throws
// Error(kDimensionMismatch).
double iou(const Mask& pred, const Mask& gt);

struct Prediction {
  int expression_id = 0;
  std::optional<Mask> mask;          // segmentation track
  std::optional<int> candidate_id;   // detection track
  std::vector<Mask> step_masks;      // one per program node, or empty
};

// Ground truth of a dataset: one render per scene, aligned with
// manifest.scenes.
class GroundTruth {
 public:
  GroundTruth(const DatasetManifest& manifest, int threads = 0);

  const DatasetManifest& manifest() const { return manifest_; }
  const RenderResult& render_of(const RefExpression& e) const;
  const SceneGraph& scene_of(const RefExpression& e) const;
  // Union of the visible masks of the final referents.
  Mask final_mask(const RefExpression& e) const;
  Mask step_mask(const RefExpression& e, int node) const;

 private:
  int position_of(const RefExpression& e) const;

  const DatasetManifest& manifest_;
  std::vector<RenderResult> renders_;
  std::map<int, int> scene_position_;
};

struct Aggregate {
  int count = 0;
  std::int64_t intersection = 0;
  std::int64_t union_pixels = 0;
  double iou_sum = 0.0;
  int correct = 0;

  void add_segmentation(std::int64_t inter, std::int64_t uni);
  void add_detection(bool hit);
  // ΣI / ΣU, 1 when ΣU = 0.
  double cumulative_iou() const;
  double mean_iou() const;
  double accuracy() const;
};

enum class Track { kSegmentation, kDetection };

struct EvalReport {
  Track track = Track::kSegmentation;
  Aggregate overall;
  // axis -> key -> aggregate
  std::map<std::string, std::map<std::string, Aggregate>> slices;
  // Foreground-pixel counts of predictions on false-premise expressions.
  std::map<std::string, int> false_premise_histogram;
  int false_premise_count = 0;
  int false_premise_zero = 0;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

// Requires exactly one mask prediction per expression. Throws
// Error(kPrediction) for missing, duplicate, unknown or wrong-track records.
EvalReport score_segmentation(const std::vector<Prediction>& predictions,
                              const GroundTruth& truth);

// Scores the single-object subset. A prediction on a multi-object expression
// or a candidate outside the scene raises Error(kPrediction); every
// single-object expression needs a prediction.
EvalReport score_detection(const std::vector<Prediction>& predictions,
                           const GroundTruth& truth);

struct StepStat {
  Aggregate in;   // over each node's input nodes
  Aggregate out;  // over the node itself
};

struct StepReport {
  std::map<std::string, StepStat> modules;  // by function name
  nlohmann::json to_json() const;
  std::string to_table() const;
};

// Mean in/out IoU per module kind. Every prediction needs one step mask per
// program node; throws Error(kPrediction) otherwise.
StepReport stepwise_iou(const std::vector<Prediction>& predictions, const GroundTruth& truth);

struct AttributeMarginal {
  double referred = 0.0;  // share among referred objects
  double overall = 0.0;   // share among all objects of the same scenes
};

struct BiasReport {
  int expressions = 0;
  std::map<int, int> referred_set_sizes;
  // attribute kind -> value -> marginal
  std::map<std::string, std::map<std::string, AttributeMarginal>> marginals;
  // Best single mask submitted for every referring expression, and its score.
  double constant_mask_cumulative_iou = 0.0;
  std::int64_t constant_mask_pixels = 0;
  int single_object_expressions = 0;
  // Chooses the object whose attribute values are most often referred.
  double frequent_candidate_accuracy = 0.0;
  double largest_mask_accuracy = 0.0;
  double uniform_random_accuracy = 0.0;  // mean of 1/k

  nlohmann::json to_json() const;
  std::string to_table() const;
};

BiasReport bias_audit(const GroundTruth& truth);

// Attribute-frequency chooser used by bias_audit, exposed for tests.
std::vector<int> frequent_candidate_choices(const GroundTruth& truth);

}  // namespace refgen

#endif  // REFGEN_EVAL_H_
