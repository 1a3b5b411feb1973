/* Copyright 2026 The uavqa Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Stable C interface to the uavqa library.
 *
 * Every fallible call returns a uavqa_status. On failure a message is
 * available from uavqa_last_error() on the calling thread until the next
 * call on that thread. Handles are opaque and released with the matching
 * *_free function; passing NULL to a *_free function is a no-op. */

#ifndef UAVQA_UAVQA_H_
#define UAVQA_UAVQA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UAVQA_BUILDING_LIBRARY)
#    define UAVQA_API __declspec(dllexport)
#  else
#    define UAVQA_API __declspec(dllimport)
#  endif
#else
#  define UAVQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavqa_status {
  UAVQA_OK = 0,
  UAVQA_ERR_INVALID_ARGUMENT = 1,
  UAVQA_ERR_IO = 2,
  UAVQA_ERR_PARSE = 3,
  UAVQA_ERR_DEGENERATE = 4,
  UAVQA_ERR_DIMENSION = 5,
  UAVQA_ERR_NOT_CONVERGED = 6,
  UAVQA_ERR_INTERNAL = 99
} uavqa_status;

typedef struct uavqa_manifest uavqa_manifest;
typedef struct uavqa_feature_table uavqa_feature_table;
typedef struct uavqa_model uavqa_model;

UAVQA_API const char* uavqa_version(void);
UAVQA_API const char* uavqa_last_error(void);
UAVQA_API const char* uavqa_status_name(uavqa_status status);

/* Manifest CSV with columns id,video,audio,group,mos. */
UAVQA_API uavqa_status uavqa_manifest_load(const char* path, uavqa_manifest** out);
UAVQA_API size_t uavqa_manifest_size(const uavqa_manifest* manifest);
/* 1 when every group equals its id. */
UAVQA_API int uavqa_manifest_in_the_wild(const uavqa_manifest* manifest);
UAVQA_API void uavqa_manifest_free(uavqa_manifest* manifest);

typedef struct uavqa_extract_options {
  int stride;          /* sample every stride-th frame; default 10 */
  int audio_features;  /* 0 drops the MFCC block */
  unsigned threads;    /* 0: hardware concurrency */
} uavqa_extract_options;

UAVQA_API void uavqa_extract_options_init(uavqa_extract_options* options);
UAVQA_API uavqa_status uavqa_extract(const uavqa_manifest* manifest,
                                     const uavqa_extract_options* options,
                                     uavqa_feature_table** out);

UAVQA_API uavqa_status uavqa_feature_table_load(const char* path, uavqa_feature_table** out);
UAVQA_API uavqa_status uavqa_feature_table_save(const uavqa_feature_table* table, const char* path);
UAVQA_API size_t uavqa_feature_table_rows(const uavqa_feature_table* table);
UAVQA_API size_t uavqa_feature_table_dims(const uavqa_feature_table* table);
UAVQA_API int uavqa_feature_table_has_audio(const uavqa_feature_table* table);
/* Copies row `row` into `values` (capacity `dims`). */
UAVQA_API uavqa_status uavqa_feature_table_row(const uavqa_feature_table* table, size_t row,
                                               double* values, size_t dims);
UAVQA_API void uavqa_feature_table_free(uavqa_feature_table* table);

/* Writes the per-sequence content attributes to out_csv. When hist_bins > 0
 * also writes <stem>_hist_<attribute>.csv next to it. */
UAVQA_API uavqa_status uavqa_attributes(const uavqa_manifest* manifest, int stride,
                                        size_t hist_bins, unsigned threads,
                                        const char* out_csv);

typedef enum uavqa_screening {
  UAVQA_SCREEN_NONE = 0,
  UAVQA_SCREEN_BT500 = 1
} uavqa_screening;

/* Raw score CSV to MOS CSV (id,mos,n). The rejected subjects are written to
 * rejected_csv when it is not NULL. */
UAVQA_API uavqa_status uavqa_mos(const char* raw_csv, double scale_lower, double scale_upper,
                                 uavqa_screening screening, const char* out_csv,
                                 const char* rejected_csv, size_t* rejected_count);

typedef struct uavqa_train_options {
  uint64_t seed;
  double tol;
  size_t max_iter;
  /* Optional grid overrides; NULL or zero length keeps the default axis. */
  const double* c_values;
  size_t c_count;
  const double* gamma_values;
  size_t gamma_count;
  const double* epsilon_values;
  size_t epsilon_count;
} uavqa_train_options;

UAVQA_API void uavqa_train_options_init(uavqa_train_options* options);

/* Grid search on every manifest entry, joined to its feature row by id. */
UAVQA_API uavqa_status uavqa_train(const uavqa_manifest* manifest,
                                   const uavqa_feature_table* table,
                                   const uavqa_train_options* options, uavqa_model** out);
UAVQA_API uavqa_status uavqa_model_save(const uavqa_model* model, const char* path);
UAVQA_API uavqa_status uavqa_model_load(const char* path, uavqa_model** out);
UAVQA_API uavqa_status uavqa_model_hyperparams(const uavqa_model* model, double* c,
                                               double* epsilon, double* gamma);
UAVQA_API double uavqa_model_train_rmse(const uavqa_model* model);
UAVQA_API size_t uavqa_model_dims(const uavqa_model* model);
UAVQA_API void uavqa_model_free(uavqa_model* model);

UAVQA_API uavqa_status uavqa_predict_row(const uavqa_model* model, const double* values,
                                         size_t dims, double* out);
/* Writes id,prediction for every row of the table. */
UAVQA_API uavqa_status uavqa_predict(const uavqa_model* model, const uavqa_feature_table* table,
                                     const char* out_csv);

typedef struct uavqa_eval_options {
  size_t repeats;  /* default 100 */
  double ratio;    /* default 0.8 */
  uint64_t master_seed;
  unsigned threads;
  uavqa_train_options train;
} uavqa_eval_options;

typedef struct uavqa_eval_summary {
  size_t repeats;
  size_t successes;
  double srcc_mean, srcc_median;
  double plcc_mean, plcc_median;
  double rmse_mean, rmse_median;
} uavqa_eval_summary;

UAVQA_API void uavqa_eval_options_init(uavqa_eval_options* options);
/* Runs the repeated split protocol. The JSON report is written to out_json
 * when it is not NULL; summary may be NULL. */
UAVQA_API uavqa_status uavqa_evaluate(const uavqa_manifest* manifest,
                                      const uavqa_feature_table* table,
                                      const uavqa_eval_options* options, const char* out_json,
                                      uavqa_eval_summary* summary);

typedef struct uavqa_synth_options {
  int contents;
  int blur_levels;
  int noise_levels;
  double seconds;
  int width;
  int height;
  int frame_rate;
  int sample_rate;
  double mos_noise;
  uint64_t seed;
} uavqa_synth_options;

UAVQA_API void uavqa_synth_options_init(uavqa_synth_options* options);
/* Writes a graded synthetic benchmark (clips plus manifest.csv) into dir. */
UAVQA_API uavqa_status uavqa_synthesize(const char* dir, const uavqa_synth_options* options);

#ifdef __cplusplus
}
#endif

#endif /* UAVQA_UAVQA_H_ */
