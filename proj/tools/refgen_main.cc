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

// refgen: generate referring-expression datasets and score predictions.
//
// Exit status: 0 success, 1 validation found problems, 2 bad configuration
// or usage, 3 malformed input file, 4 generation exhausted its retries.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "refgen/config.h"
#include "refgen/errors.h"
#include "refgen/eval.h"
#include "refgen/generator.h"
#include "refgen/io.h"
#include "refgen/render.h"
#include "refgen/scene.h"
#include "refgen/templates.h"

namespace {

using namespace refgen;

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitExhausted = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kTemplate:
      return kExitConfig;
    case ErrorCode::kGenerationExhausted:
    case ErrorCode::kSamplingExhausted:
      return kExitExhausted;
    default:
      return kExitFormat;
  }
}

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::optional<int> n;
  std::optional<int> per_image;
  std::optional<std::string> split;
  std::string out;
  std::string scenes_path;
  std::string manifest_path;
  std::string predictions_path;
  std::string templates_dir;
  int threads = 0;
};

GeneratorConfig load_config(const Options& o) {
  GeneratorConfig c;
  if (!o.config_path.empty()) {
    nlohmann::json doc;
    try {
      doc = read_json_file(o.config_path);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, e.what());
    }
    c = GeneratorConfig::from_json(doc);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.n) c.scene_count = *o.n;
  if (o.per_image) c.per_image = *o.per_image;
  if (o.split) {
    auto split = parse_split_condition(*o.split);
    if (!split) throw Error(ErrorCode::kConfig, "--split must be A, B or none");
    c.scene.split = *split;
  }
  c.validate();
  return c;
}

TemplateCatalog load_catalog(const Options& o, const GeneratorConfig& config) {
  TemplateCatalog catalog = o.templates_dir.empty()
                                ? TemplateCatalog::load_default()
                                : TemplateCatalog::from_directory(o.templates_dir);
  config.apply_weights(catalog);
  return catalog;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    write_text_file(o.out, text);
  }
}

int run_gen_scenes(const Options& o) {
  const GeneratorConfig config = load_config(o);
  const auto scenes = sample_scenes(config.scene_count, config.seed, config.scene);
  emit(o, dump_document(scenes_document(scenes)));
  return 0;
}

int run_render(const Options& o) {
  const auto scenes = scenes_from_document(read_json_file(o.scenes_path));
  std::vector<RenderResult> renders;
  for (const SceneGraph& s : scenes) renders.push_back(rasterize(s));
  emit(o, dump_document(renders_document(scenes, renders)));
  return 0;
}

int run_generate(const Options& o, DatasetMode mode) {
  GeneratorConfig config = load_config(o);
  const TemplateCatalog catalog = load_catalog(o, config);
  auto scenes = scenes_from_document(read_json_file(o.scenes_path));
  config.scene_count = static_cast<int>(scenes.size());
  DatasetManifest m = generate_dataset(std::move(scenes), config.per_image, catalog, config.seed,
                                       config.generation, mode, o.threads);
  m.config = config.to_json();
  m.config_hash = config.hash();
  m.check_invariants();
  emit(o, dump_document(manifest_to_json(m)));
  std::cerr << m.expressions.size() << " expressions over " << m.scenes.size() << " scenes\n";
  return 0;
}

struct LoadedDataset {
  DatasetManifest manifest;
  std::vector<Prediction> predictions;
};

LoadedDataset load_dataset(const Options& o, bool with_predictions) {
  LoadedDataset d;
  d.manifest = manifest_from_json(read_json_file(o.manifest_path));
  if (with_predictions) {
    std::ifstream in(o.predictions_path);
    if (!in) throw Error(ErrorCode::kFormat, "cannot open " + o.predictions_path);
    const CameraSpec camera = d.manifest.scenes.empty() ? CameraSpec{} : d.manifest.scenes[0].camera;
    for (const SceneGraph& s : d.manifest.scenes) {
      if (s.camera.width != camera.width || s.camera.height != camera.height) {
        throw Error(ErrorCode::kFormat, "scenes of the manifest differ in resolution");
      }
    }
    d.predictions = read_predictions(in, camera.width, camera.height);
  }
  return d;
}

int run_score(const Options& o, Track track) {
  const LoadedDataset d = load_dataset(o, true);
  const GroundTruth truth(d.manifest, o.threads);
  const EvalReport report = track == Track::kSegmentation
                                ? score_segmentation(d.predictions, truth)
                                : score_detection(d.predictions, truth);
  std::cout << report.to_table();
  if (!o.out.empty()) write_text_file(o.out, dump_document(report.to_json()));
  return 0;
}

int run_score_steps(const Options& o) {
  const LoadedDataset d = load_dataset(o, true);
  const GroundTruth truth(d.manifest, o.threads);
  const StepReport report = stepwise_iou(d.predictions, truth);
  std::cout << report.to_table();
  if (!o.out.empty()) write_text_file(o.out, dump_document(report.to_json()));
  return 0;
}

int run_audit(const Options& o) {
  const LoadedDataset d = load_dataset(o, false);
  const GroundTruth truth(d.manifest, o.threads);
  const BiasReport report = bias_audit(truth);
  std::cout << report.to_table();
  if (!o.out.empty()) write_text_file(o.out, dump_document(report.to_json()));
  return 0;
}

int run_validate(const Options& o) {
  const auto issues = validate_manifest(read_json_file(o.manifest_path));
  for (const std::string& issue : issues) std::cout << issue << "\n";
  if (!issues.empty()) {
    std::cout << issues.size() << " problem(s) found\n";
    return kExitValidation;
  }
  std::cout << "manifest ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Referring-expression dataset generator and scorer"};
  app.require_subcommand(1);
  Options o;

  auto seed_flag = [&](CLI::App* c) {
    c->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; },
                                          "Master random seed");
    c->add_option("--config", o.config_path, "Generator configuration (JSON)");
  };
  auto out_flag = [&](CLI::App* c) { c->add_option("--out", o.out, "Output file (default stdout)"); };

  CLI::App* gen_scenes = app.add_subcommand("gen-scenes", "Sample scenes");
  seed_flag(gen_scenes);
  gen_scenes->add_option_function<int>("--n", [&](const int& v) { o.n = v; }, "Number of scenes");
  gen_scenes->add_option_function<std::string>("--split", [&](const std::string& v) { o.split = v; },
                                               "Attribute split condition: A, B or none");
  out_flag(gen_scenes);

  CLI::App* render = app.add_subcommand("render", "Rasterize scenes into masks");
  render->add_option("--scenes", o.scenes_path, "Scenes document")->required();
  out_flag(render);

  CLI::App* gen_refexps = app.add_subcommand("gen-refexps", "Generate referring expressions");
  CLI::App* gen_fp = app.add_subcommand("gen-false-premise", "Generate false-premise expressions");
  for (CLI::App* c : {gen_refexps, gen_fp}) {
    seed_flag(c);
    c->add_option("--scenes", o.scenes_path, "Scenes document")->required();
    c->add_option_function<int>("--per-image", [&](const int& v) { o.per_image = v; },
                                "Expressions per scene");
    c->add_option("--templates", o.templates_dir, "Template family directory");
    c->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    out_flag(c);
  }

  CLI::App* score_seg = app.add_subcommand("score-seg", "Score segmentation predictions");
  CLI::App* score_det = app.add_subcommand("score-det", "Score detection predictions");
  CLI::App* score_steps = app.add_subcommand("score-steps", "Score per-step mask predictions");
  for (CLI::App* c : {score_seg, score_det, score_steps}) {
    c->add_option("--manifest", o.manifest_path, "Dataset manifest")->required();
    c->add_option("--predictions", o.predictions_path, "Prediction records (JSON lines)")
        ->required();
    c->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    c->add_option("--out", o.out, "Write the JSON report here");
  }

  CLI::App* audit = app.add_subcommand("audit-bias", "Expression-blind bias audit");
  audit->add_option("--manifest", o.manifest_path, "Dataset manifest")->required();
  audit->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  audit->add_option("--out", o.out, "Write the JSON report here");

  CLI::App* validate = app.add_subcommand("validate", "Re-execute and check a manifest");
  validate->add_option("--manifest", o.manifest_path, "Dataset manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (gen_scenes->parsed()) return run_gen_scenes(o);
    if (render->parsed()) return run_render(o);
    if (gen_refexps->parsed()) return run_generate(o, DatasetMode::kReferring);
    if (gen_fp->parsed()) return run_generate(o, DatasetMode::kFalsePremise);
    if (score_seg->parsed()) return run_score(o, Track::kSegmentation);
    if (score_det->parsed()) return run_score(o, Track::kDetection);
    if (score_steps->parsed()) return run_score_steps(o);
    if (audit->parsed()) return run_audit(o);
    if (validate->parsed()) return run_validate(o);
  } catch (const Error& e) {
    std::cerr << "refgen: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "refgen: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitConfig;
}
