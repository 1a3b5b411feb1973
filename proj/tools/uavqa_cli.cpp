// Copyright 2026 The uavqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. Uses only the C interface of libuavqa.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "uavqa/uavqa.h"

namespace {

constexpr int kUsageExit = 2;
constexpr int kFailureExit = 1;

int report(uavqa_status status) {
  if (status == UAVQA_OK) return 0;
  std::cerr << "uavqa: " << uavqa_status_name(status) << ": " << uavqa_last_error() << '\n';
  return kFailureExit;
}

// RAII wrappers so early returns release handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};
using Manifest = Handle<uavqa_manifest, uavqa_manifest_free>;
using Table = Handle<uavqa_feature_table, uavqa_feature_table_free>;
using Model = Handle<uavqa_model, uavqa_model_free>;

struct Args {
  std::string manifest, features, model, raw, out, rejected, screen = "bt500", out_dir;
  int stride = 10;
  std::size_t hist_bins = 0;
  bool no_audio = false;
  std::uint64_t seed = 0;
  std::size_t repeats = 100;
  double ratio = 0.8;
  unsigned threads = 0;
  double scale_min = 0.0, scale_max = 100.0;
  uavqa_synth_options synth{};
};

int run_extract(const Args& a) {
  Manifest m;
  if (auto s = uavqa_manifest_load(a.manifest.c_str(), &m.ptr)) return report(s);
  uavqa_extract_options o;
  uavqa_extract_options_init(&o);
  o.stride = a.stride;
  o.audio_features = a.no_audio ? 0 : 1;
  o.threads = a.threads;
  Table t;
  if (auto s = uavqa_extract(m.ptr, &o, &t.ptr)) return report(s);
  return report(uavqa_feature_table_save(t.ptr, a.out.c_str()));
}

int run_attrs(const Args& a) {
  Manifest m;
  if (auto s = uavqa_manifest_load(a.manifest.c_str(), &m.ptr)) return report(s);
  return report(uavqa_attributes(m.ptr, a.stride, a.hist_bins, a.threads, a.out.c_str()));
}

int run_mos(const Args& a) {
  std::string rejected = a.rejected;
  if (rejected.empty()) {
    const std::filesystem::path out(a.out);
    rejected = (out.parent_path() / (out.stem().string() + "_rejected_subjects.csv")).string();
  }
  const auto screening = a.screen == "bt500" ? UAVQA_SCREEN_BT500 : UAVQA_SCREEN_NONE;
  std::size_t n_rejected = 0;
  const auto s = uavqa_mos(a.raw.c_str(), a.scale_min, a.scale_max, screening, a.out.c_str(),
                           rejected.c_str(), &n_rejected);
  if (s == UAVQA_OK) std::cout << "rejected subjects: " << n_rejected << '\n';
  return report(s);
}

int run_train(const Args& a) {
  Manifest m;
  Table t;
  if (auto s = uavqa_manifest_load(a.manifest.c_str(), &m.ptr)) return report(s);
  if (auto s = uavqa_feature_table_load(a.features.c_str(), &t.ptr)) return report(s);
  uavqa_train_options o;
  uavqa_train_options_init(&o);
  o.seed = a.seed;
  Model model;
  if (auto s = uavqa_train(m.ptr, t.ptr, &o, &model.ptr)) return report(s);
  double c = 0, eps = 0, gamma = 0;
  uavqa_model_hyperparams(model.ptr, &c, &eps, &gamma);
  std::cout << "C=" << c << " epsilon=" << eps << " gamma=" << gamma
            << " train_rmse=" << uavqa_model_train_rmse(model.ptr) << '\n';
  return report(uavqa_model_save(model.ptr, a.out.c_str()));
}

int run_predict(const Args& a) {
  Model model;
  Table t;
  if (auto s = uavqa_model_load(a.model.c_str(), &model.ptr)) return report(s);
  if (auto s = uavqa_feature_table_load(a.features.c_str(), &t.ptr)) return report(s);
  return report(uavqa_predict(model.ptr, t.ptr, a.out.c_str()));
}

int run_eval(const Args& a) {
  Manifest m;
  Table t;
  if (auto s = uavqa_manifest_load(a.manifest.c_str(), &m.ptr)) return report(s);
  if (auto s = uavqa_feature_table_load(a.features.c_str(), &t.ptr)) return report(s);
  uavqa_eval_options o;
  uavqa_eval_options_init(&o);
  o.repeats = a.repeats;
  o.ratio = a.ratio;
  o.master_seed = a.seed;
  o.threads = a.threads;
  uavqa_eval_summary sum{};
  const auto s = uavqa_evaluate(m.ptr, t.ptr, &o, a.out.empty() ? nullptr : a.out.c_str(), &sum);
  if (s == UAVQA_OK) {
    std::printf("repeats %zu (ok %zu)\nSRCC mean %.4f median %.4f\nPLCC mean %.4f median %.4f\n"
                "RMSE mean %.4f median %.4f\n",
                sum.repeats, sum.successes, sum.srcc_mean, sum.srcc_median, sum.plcc_mean,
                sum.plcc_median, sum.rmse_mean, sum.rmse_median);
  }
  return report(s);
}

int run_synth(const Args& a) {
  uavqa_synth_options o = a.synth;
  o.seed = a.seed;
  return report(uavqa_synthesize(a.out_dir.c_str(), &o));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio-visual quality assessment for user-generated content"};
  app.set_version_flag("--version", std::string(uavqa_version()));
  app.require_subcommand(1);
  Args a;
  uavqa_synth_options_init(&a.synth);

  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", a.manifest, "manifest CSV (id,video,audio,group,mos)")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_features = [&](CLI::App* sub) {
    sub->add_option("--features", a.features, "feature CSV written by extract")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", a.threads, "worker threads (0: all cores)");
  };

  auto* extract = app.add_subcommand("extract", "extract [w, h, video, audio] feature vectors");
  add_manifest(extract);
  extract->add_option("--out", a.out, "feature CSV")->required();
  extract->add_flag("--no-audio-features", a.no_audio, "omit the MFCC block");
  extract->add_option("--stride", a.stride, "frame sampling stride")->check(CLI::PositiveNumber);
  add_threads(extract);

  auto* attrs = app.add_subcommand("attrs", "content attributes per sequence");
  add_manifest(attrs);
  attrs->add_option("--out", a.out, "attribute CSV")->required();
  attrs->add_option("--stride", a.stride, "frame sampling stride")->check(CLI::PositiveNumber);
  attrs->add_option("--hist-bins", a.hist_bins, "also write per-attribute histograms");
  add_threads(attrs);

  auto* mos = app.add_subcommand("mos", "MOS from raw subjective scores");
  mos->add_option("--raw", a.raw, "raw score CSV (subjects x sequences)")
      ->required()
      ->check(CLI::ExistingFile);
  mos->add_option("--screen", a.screen, "observer screening")->check(CLI::IsMember({"bt500", "none"}));
  mos->add_option("--out", a.out, "MOS CSV")->required();
  mos->add_option("--rejected", a.rejected, "rejected-subject CSV (default <out>_rejected_subjects.csv)");
  mos->add_option("--scale-min", a.scale_min, "lowest score on the rating scale");
  mos->add_option("--scale-max", a.scale_max, "highest score on the rating scale");

  auto* train = app.add_subcommand("train", "grid-search an SVR on all manifest entries");
  add_manifest(train);
  add_features(train);
  train->add_option("--out", a.out, "model JSON")->required();
  train->add_option("--seed", a.seed, "solver tie-break seed");

  auto* predict = app.add_subcommand("predict", "score feature rows with a trained model");
  predict->add_option("--model", a.model, "model JSON")->required()->check(CLI::ExistingFile);
  add_features(predict);
  predict->add_option("--out", a.out, "prediction CSV")->required();

  auto* eval = app.add_subcommand("eval", "repeated content-separated train/test evaluation");
  add_manifest(eval);
  add_features(eval);
  eval->add_option("--repeats", a.repeats, "number of random splits")->check(CLI::PositiveNumber);
  eval->add_option("--ratio", a.ratio, "training fraction")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--seed", a.seed, "master seed");
  eval->add_option("--out", a.out, "report JSON");
  add_threads(eval);

  auto* synth = app.add_subcommand("synth", "write a graded synthetic benchmark");
  synth->add_option("--out-dir", a.out_dir, "output directory")->required();
  synth->add_option("--seed", a.seed, "generator seed");
  synth->add_option("--contents", a.synth.contents, "content count");
  synth->add_option("--blur-levels", a.synth.blur_levels, "blur levels");
  synth->add_option("--noise-levels", a.synth.noise_levels, "audio noise levels");
  synth->add_option("--seconds", a.synth.seconds, "clip duration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "uavqa: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    std::cerr << failing->help();
    return kUsageExit;
  }

  if (*extract) return run_extract(a);
  if (*attrs) return run_attrs(a);
  if (*mos) return run_mos(a);
  if (*train) return run_train(a);
  if (*predict) return run_predict(a);
  if (*eval) return run_eval(a);
  if (*synth) return run_synth(a);
  return kUsageExit;
}
