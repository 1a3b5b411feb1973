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


#include "uavqa/uavqa.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "csv.hpp"
#include "uavqa/error.hpp"
#include "uavqa/evaluation.hpp"
#include "uavqa/pipeline.hpp"
#include "uavqa/regressor.hpp"
#include "uavqa/subjective.hpp"

struct uavqa_manifest {
  uavqa::Manifest value;
};
struct uavqa_feature_table {
  uavqa::FeatureTable value;
};
struct uavqa_model {
  uavqa::SvrModel value;
  double train_rmse = NAN;
};

namespace {

thread_local std::string g_last_error;

uavqa_status to_status(uavqa::ErrorCode code) {
  switch (code) {
    case uavqa::ErrorCode::kInvalidArgument: return UAVQA_ERR_INVALID_ARGUMENT;
    case uavqa::ErrorCode::kIo: return UAVQA_ERR_IO;
    case uavqa::ErrorCode::kParse: return UAVQA_ERR_PARSE;
    case uavqa::ErrorCode::kDegenerate: return UAVQA_ERR_DEGENERATE;
    case uavqa::ErrorCode::kDimensionMismatch: return UAVQA_ERR_DIMENSION;
    case uavqa::ErrorCode::kNotConverged: return UAVQA_ERR_NOT_CONVERGED;
  }
  return UAVQA_ERR_INTERNAL;
}

template <typename Fn>
uavqa_status guarded(Fn fn) {
  g_last_error.clear();
  try {
    fn();
    return UAVQA_OK;
  } catch (const uavqa::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return UAVQA_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) uavqa::Fail(uavqa::ErrorCode::kInvalidArgument, what);
}

uavqa::Grid make_grid(const uavqa_train_options& o) {
  uavqa::Grid grid = uavqa::Grid::defaults();
  auto take = [](const double* p, std::size_t n, std::vector<double>& axis) {
    if (p != nullptr && n > 0) axis.assign(p, p + n);
  };
  take(o.c_values, o.c_count, grid.c);
  take(o.gamma_values, o.gamma_count, grid.gamma);
  take(o.epsilon_values, o.epsilon_count, grid.epsilon);
  return grid;
}

uavqa::TrainOptions make_train(const uavqa_train_options& o) {
  uavqa::TrainOptions t;
  t.seed = o.seed;
  if (o.tol > 0) t.tol = o.tol;
  if (o.max_iter > 0) t.max_iter = o.max_iter;
  return t;
}

}  // namespace

extern "C" {

const char* uavqa_version(void) { return "0.1.0"; }

const char* uavqa_last_error(void) { return g_last_error.c_str(); }

const char* uavqa_status_name(uavqa_status status) {
  switch (status) {
    case UAVQA_OK: return "ok";
    case UAVQA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case UAVQA_ERR_IO: return "i/o error";
    case UAVQA_ERR_PARSE: return "parse error";
    case UAVQA_ERR_DEGENERATE: return "degenerate input";
    case UAVQA_ERR_DIMENSION: return "dimension mismatch";
    case UAVQA_ERR_NOT_CONVERGED: return "not converged";
    case UAVQA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

uavqa_status uavqa_manifest_load(const char* path, uavqa_manifest** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto m = std::make_unique<uavqa_manifest>();
    m->value = uavqa::read_manifest(path);
    *out = m.release();
  });
}

size_t uavqa_manifest_size(const uavqa_manifest* manifest) {
  return manifest ? manifest->value.size() : 0;
}

int uavqa_manifest_in_the_wild(const uavqa_manifest* manifest) {
  return manifest && manifest->value.kind == uavqa::DatabaseKind::kInTheWild ? 1 : 0;
}

void uavqa_manifest_free(uavqa_manifest* manifest) { delete manifest; }

void uavqa_extract_options_init(uavqa_extract_options* options) {
  if (!options) return;
  options->stride = 10;
  options->audio_features = 1;
  options->threads = 0;
}

uavqa_status uavqa_extract(const uavqa_manifest* manifest, const uavqa_extract_options* options,
                           uavqa_feature_table** out) {
  return guarded([&] {
    require(manifest != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    uavqa_extract_options o;
    uavqa_extract_options_init(&o);
    if (options) o = *options;
    require(o.stride >= 1, "stride must be >= 1");
    uavqa::ExtractOptions eo;
    eo.stride = o.stride;
    eo.audio_features = o.audio_features != 0;
    eo.threads = o.threads;
    auto t = std::make_unique<uavqa_feature_table>();
    t->value = uavqa::extract_features(manifest->value, eo);
    *out = t.release();
  });
}

uavqa_status uavqa_feature_table_load(const char* path, uavqa_feature_table** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto t = std::make_unique<uavqa_feature_table>();
    t->value = uavqa::read_feature_table(path);
    *out = t.release();
  });
}

uavqa_status uavqa_feature_table_save(const uavqa_feature_table* table, const char* path) {
  return guarded([&] {
    require(table != nullptr && path != nullptr, "null argument");
    uavqa::write_feature_table(path, table->value);
  });
}

size_t uavqa_feature_table_rows(const uavqa_feature_table* table) {
  return table ? table->value.rows.size() : 0;
}

size_t uavqa_feature_table_dims(const uavqa_feature_table* table) {
  return table ? table->value.dims() : 0;
}

int uavqa_feature_table_has_audio(const uavqa_feature_table* table) {
  return table && table->value.has_audio() ? 1 : 0;
}

uavqa_status uavqa_feature_table_row(const uavqa_feature_table* table, size_t row, double* values,
                                     size_t dims) {
  return guarded([&] {
    require(table != nullptr && values != nullptr, "null argument");
    require(row < table->value.rows.size(), "row index out of range");
    const auto& r = table->value.rows[row];
    if (dims != r.size()) uavqa::Fail(uavqa::ErrorCode::kDimensionMismatch, "buffer size does not match table dims");
    std::copy(r.begin(), r.end(), values);
  });
}

void uavqa_feature_table_free(uavqa_feature_table* table) { delete table; }

uavqa_status uavqa_attributes(const uavqa_manifest* manifest, int stride, size_t hist_bins,
                              unsigned threads, const char* out_csv) {
  return guarded([&] {
    require(manifest != nullptr && out_csv != nullptr, "null argument");
    require(stride >= 1, "stride must be >= 1");
    const auto rows = uavqa::manifest_attributes(manifest->value, stride, threads);
    uavqa::write_attributes_csv(out_csv, rows);
    if (hist_bins > 0) uavqa::write_attribute_histograms(out_csv, rows, hist_bins);
  });
}

uavqa_status uavqa_mos(const char* raw_csv, double scale_lower, double scale_upper,
                       uavqa_screening screening, const char* out_csv, const char* rejected_csv,
                       size_t* rejected_count) {
  return guarded([&] {
    require(raw_csv != nullptr && out_csv != nullptr, "null argument");
    require(screening == UAVQA_SCREEN_NONE || screening == UAVQA_SCREEN_BT500, "unknown screening mode");
    const auto raw = uavqa::read_score_csv(raw_csv, scale_lower, scale_upper);
    const auto normalized = uavqa::zscore_normalize(raw);
    std::vector<bool> rejected(raw.n_subjects(), false);
    if (screening == UAVQA_SCREEN_BT500) rejected = uavqa::screen_subjects(normalized.scores);
    const auto table = uavqa::compute_mos(normalized.scores, rejected);
    uavqa::write_mos_csv(out_csv, table);
    if (rejected_csv) uavqa::write_rejected_subjects(rejected_csv, table);
    if (rejected_count) *rejected_count = table.rejected_subjects.size();
  });
}

void uavqa_train_options_init(uavqa_train_options* options) {
  if (!options) return;
  *options = uavqa_train_options{};
  options->tol = 1e-3;
  options->max_iter = 100000;
}

uavqa_status uavqa_train(const uavqa_manifest* manifest, const uavqa_feature_table* table,
                         const uavqa_train_options* options, uavqa_model** out) {
  return guarded([&] {
    require(manifest != nullptr && table != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    uavqa_train_options o;
    uavqa_train_options_init(&o);
    if (options) o = *options;
    manifest->value.require_mos();
    uavqa::Matrix x;
    std::vector<double> y;
    for (const auto& e : manifest->value.entries) {
      const auto row = table->value.find(e.id);
      if (row == std::string::npos) {
        uavqa::Fail(uavqa::ErrorCode::kInvalidArgument, "no features for manifest id '" + e.id + "'");
      }
      x.push_back(table->value.rows[row]);
      y.push_back(e.mos);
    }
    auto fit = uavqa::grid_search(x, y, make_grid(o), make_train(o));
    auto m = std::make_unique<uavqa_model>();
    m->value = std::move(fit.model);
    m->value.feature_names = table->value.names;
    m->train_rmse = fit.report.train_rmse;
    *out = m.release();
  });
}

uavqa_status uavqa_model_save(const uavqa_model* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) uavqa::Fail(uavqa::ErrorCode::kIo, std::string("cannot write ") + path);
    f << uavqa::serialize_model(model->value);
    if (!f) uavqa::Fail(uavqa::ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

uavqa_status uavqa_model_load(const char* path, uavqa_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    std::ifstream f(path, std::ios::binary);
    if (!f) uavqa::Fail(uavqa::ErrorCode::kIo, std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    auto m = std::make_unique<uavqa_model>();
    m->value = uavqa::parse_model(ss.str());
    *out = m.release();
  });
}

uavqa_status uavqa_model_hyperparams(const uavqa_model* model, double* c, double* epsilon,
                                     double* gamma) {
  return guarded([&] {
    require(model != nullptr, "null argument");
    if (c) *c = model->value.hyperparams.c;
    if (epsilon) *epsilon = model->value.hyperparams.epsilon;
    if (gamma) *gamma = model->value.hyperparams.gamma;
  });
}

double uavqa_model_train_rmse(const uavqa_model* model) { return model ? model->train_rmse : NAN; }

size_t uavqa_model_dims(const uavqa_model* model) { return model ? model->value.dims() : 0; }

void uavqa_model_free(uavqa_model* model) { delete model; }

uavqa_status uavqa_predict_row(const uavqa_model* model, const double* values, size_t dims,
                               double* out) {
  return guarded([&] {
    require(model != nullptr && values != nullptr && out != nullptr, "null argument");
    *out = uavqa::predict(model->value, std::span<const double>(values, dims));
  });
}

uavqa_status uavqa_predict(const uavqa_model* model, const uavqa_feature_table* table,
                           const char* out_csv) {
  return guarded([&] {
    require(model != nullptr && table != nullptr && out_csv != nullptr, "null argument");
    const auto& names = model->value.feature_names;
    if (!names.empty() && names != table->value.names) {
      uavqa::Fail(uavqa::ErrorCode::kDimensionMismatch,
                  "feature columns differ from the ones the model was trained on");
    }
    const auto pred = uavqa::predict(model->value, table->value.rows);
    std::vector<uavqa::csv::Row> rows{{"id", "prediction"}};
    for (std::size_t i = 0; i < pred.size(); ++i) {
      rows.push_back({table->value.ids[i], uavqa::csv::format_double(pred[i])});
    }
    uavqa::csv::write(out_csv, rows);
  });
}

void uavqa_eval_options_init(uavqa_eval_options* options) {
  if (!options) return;
  options->repeats = 100;
  options->ratio = 0.8;
  options->master_seed = 0;
  options->threads = 0;
  uavqa_train_options_init(&options->train);
}

uavqa_status uavqa_evaluate(const uavqa_manifest* manifest, const uavqa_feature_table* table,
                            const uavqa_eval_options* options, const char* out_json,
                            uavqa_eval_summary* summary) {
  return guarded([&] {
    require(manifest != nullptr && table != nullptr, "null argument");
    uavqa_eval_options o;
    uavqa_eval_options_init(&o);
    if (options) o = *options;
    require(o.ratio > 0.0 && o.ratio < 1.0, "ratio must lie in (0, 1)");
    uavqa::ProtocolOptions po;
    po.repeats = o.repeats;
    po.ratio = o.ratio;
    po.master_seed = o.master_seed;
    po.threads = o.threads;
    po.grid = make_grid(o.train);
    po.train = make_train(o.train);
    const auto report = uavqa::run_protocol(manifest->value, table->value, po);
    if (out_json) {
      std::ofstream f(out_json, std::ios::binary);
      if (!f) uavqa::Fail(uavqa::ErrorCode::kIo, std::string("cannot write ") + out_json);
      f << uavqa::report_to_json(report) << '\n';
    }
    if (summary) {
      summary->repeats = report.repeat_count;
      summary->successes = report.successes;
      summary->srcc_mean = report.srcc.mean;
      summary->srcc_median = report.srcc.median;
      summary->plcc_mean = report.plcc.mean;
      summary->plcc_median = report.plcc.median;
      summary->rmse_mean = report.rmse.mean;
      summary->rmse_median = report.rmse.median;
    }
    if (report.successes == 0) {
      uavqa::Fail(uavqa::ErrorCode::kNotConverged,
                  "every repeat failed; first error: " + report.repeats.front().error);
    }
  });
}

void uavqa_synth_options_init(uavqa_synth_options* options) {
  if (!options) return;
  const uavqa::SynthOptions d;
  options->contents = d.contents;
  options->blur_levels = d.blur_levels;
  options->noise_levels = d.noise_levels;
  options->seconds = d.seconds;
  options->width = d.width;
  options->height = d.height;
  options->frame_rate = d.frame_rate;
  options->sample_rate = d.sample_rate;
  options->mos_noise = d.mos_noise;
  options->seed = d.seed;
}

uavqa_status uavqa_synthesize(const char* dir, const uavqa_synth_options* options) {
  return guarded([&] {
    require(dir != nullptr, "null argument");
    uavqa_synth_options o;
    uavqa_synth_options_init(&o);
    if (options) o = *options;
    uavqa::SynthOptions so;
    so.contents = o.contents;
    so.blur_levels = o.blur_levels;
    so.noise_levels = o.noise_levels;
    so.seconds = o.seconds;
    so.width = o.width;
    so.height = o.height;
    so.frame_rate = o.frame_rate;
    so.sample_rate = o.sample_rate;
    so.mos_noise = o.mos_noise;
    so.seed = o.seed;
    uavqa::synthesize_benchmark(dir, so);
  });
}

}  // extern "C"
