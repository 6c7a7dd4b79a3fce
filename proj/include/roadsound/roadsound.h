// Copyright 2026 The roadsound Authors.
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

/* C interface to the roadsound library. Every entry point returns a
 * roadsound_status; on failure roadsound_last_error() describes the most
 * recent error on the calling thread. Strings returned through char** out
 * parameters are owned by the caller and released with
 * roadsound_string_free. */
#ifndef ROADSOUND_ROADSOUND_H_
#define ROADSOUND_ROADSOUND_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ROADSOUND_API __declspec(dllexport)
#else
#define ROADSOUND_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum roadsound_status {
  ROADSOUND_OK = 0,
  ROADSOUND_ERR_INVALID_ARGUMENT = 1,
  ROADSOUND_ERR_IO = 2,
  ROADSOUND_ERR_MALFORMED_WAV = 3,
  ROADSOUND_ERR_UNSUPPORTED_ENCODING = 4,
  ROADSOUND_ERR_EMPTY_CLIP = 5,
  ROADSOUND_ERR_CLIP_TOO_SHORT = 6,
  ROADSOUND_ERR_DEGENERATE_BAND = 7,
  ROADSOUND_ERR_DEGENERATE_SPECTRUM = 8,
  ROADSOUND_ERR_SHAPE_MISMATCH = 9,
  ROADSOUND_ERR_CHECKSUM_MISMATCH = 10,
  ROADSOUND_ERR_VERSION_UNSUPPORTED = 11,
  ROADSOUND_ERR_TOO_FEW_SAMPLES = 12,
  ROADSOUND_ERR_EMPTY_FOLD = 13,
  ROADSOUND_ERR_TRAINING_DIVERGED = 14,
  ROADSOUND_ERR_INTERNAL = 15
} roadsound_status;

typedef enum roadsound_feature_kind {
  ROADSOUND_FEATURES_MELSPEC = 0,
  ROADSOUND_FEATURES_MFCC = 1,
  ROADSOUND_FEATURES_GFCC = 2
} roadsound_feature_kind;

#define ROADSOUND_CLASS_COUNT 4

ROADSOUND_API const char* roadsound_version(void);
ROADSOUND_API const char* roadsound_status_name(roadsound_status status);
ROADSOUND_API const char* roadsound_last_error(void);
ROADSOUND_API void roadsound_string_free(char* s);

/* "car", "truck", "motorcycle", "no_vehicle"; NULL when out of range. */
ROADSOUND_API const char* roadsound_class_name(int label);

/* ---- synthetic corpus ---- */

/* Writes per_class clips per class under out_dir plus out_dir/manifest.csv. */
ROADSOUND_API roadsound_status roadsound_synth_generate(const char* out_dir, size_t per_class,
                                                        uint64_t seed, int jobs,
                                                        size_t* n_written);

/* ---- augmentation ---- */

typedef struct roadsound_augment_params {
  double gain_min, gain_max;
  double noise_rate_min, noise_rate_max;
  double stretch_min, stretch_max;
  uint64_t seed;
  double sample_rate;
  double seconds;
  int jobs; /* 0 = all cores */
} roadsound_augment_params;

typedef struct roadsound_augment_summary {
  size_t input_entries;
  size_t output_entries;
  size_t failed_entries;
} roadsound_augment_summary;

typedef void (*roadsound_failure_fn)(const char* entry_id, const char* message, void* user);

ROADSOUND_API void roadsound_augment_params_default(roadsound_augment_params* params);

/* Augments every original in manifest_path into out_dir and writes the
 * expanded manifest to out_manifest (out_dir/manifest.csv when NULL).
 * Failed entries are reported through on_failure and skipped with their
 * augmentations; the call still returns ROADSOUND_OK. */
ROADSOUND_API roadsound_status roadsound_augment(const char* manifest_path, const char* out_dir,
                                                 const char* out_manifest,
                                                 const roadsound_augment_params* params,
                                                 roadsound_failure_fn on_failure, void* user,
                                                 roadsound_augment_summary* summary);

/* ---- feature extraction ---- */

typedef struct roadsound_extract_summary {
  size_t entries;
  size_t rows;
  size_t cols;
  size_t global_dim;
} roadsound_extract_summary;

/* Extracts features for every manifest entry, filling cache_dir when
 * non-NULL. Fails on an empty manifest. */
ROADSOUND_API roadsound_status roadsound_extract(const char* manifest_path,
                                                 roadsound_feature_kind kind,
                                                 const char* cache_dir, int jobs,
                                                 roadsound_extract_summary* summary);

/* ---- training ---- */

typedef struct roadsound_train_options {
  roadsound_feature_kind features;
  int folds;
  size_t epochs;
  size_t early_stop_patience;
  double lr_initial;
  size_t lr_reduce_patience;
  double lr_reduce_factor;
  double lr_min;
  size_t batch_size;
  double dropout;
  uint64_t seed;
  int jobs;
  const char* cache_dir; /* optional */
} roadsound_train_options;

typedef struct roadsound_epoch_info {
  int fold;
  size_t epoch;
  double train_loss, train_accuracy;
  double val_loss, val_accuracy;
  double learning_rate;
} roadsound_epoch_info;

typedef void (*roadsound_epoch_fn)(const roadsound_epoch_info* info, void* user);

ROADSOUND_API void roadsound_train_options_default(roadsound_train_options* options);

/* Grouped stratified k-fold cross-validation. Entries keep the folds stored
 * in the manifest when every entry has one below options->folds; otherwise
 * folds are assigned from options->seed. Writes out_checkpoint (the fold
 * model with the highest held-out accuracy), <stem>.fold<i>.ckpt per fold,
 * <stem>.report.txt and <stem>.report.json. report_text and
 * mean_accuracy are optional outputs. */
ROADSOUND_API roadsound_status roadsound_cross_validate(const char* manifest_path,
                                                        const char* out_checkpoint,
                                                        const roadsound_train_options* options,
                                                        roadsound_epoch_fn on_epoch, void* user,
                                                        char** report_text,
                                                        double* mean_accuracy);

/* ---- inference ---- */

typedef struct roadsound_model roadsound_model;

typedef struct roadsound_prediction {
  int label;
  double confidence;
  double probabilities[ROADSOUND_CLASS_COUNT];
} roadsound_prediction;

ROADSOUND_API roadsound_status roadsound_model_load(const char* path, roadsound_model** out);
ROADSOUND_API void roadsound_model_free(roadsound_model* model);
ROADSOUND_API roadsound_feature_kind roadsound_model_feature_kind(const roadsound_model* model);

/* Safe to call concurrently on one model. */
ROADSOUND_API roadsound_status roadsound_model_predict_file(const roadsound_model* model,
                                                            const char* wav_path,
                                                            roadsound_prediction* out);
ROADSOUND_API roadsound_status roadsound_model_predict_wav(const roadsound_model* model,
                                                           const uint8_t* bytes, size_t size,
                                                           roadsound_prediction* out);

#ifdef __cplusplus
}
#endif

#endif /* ROADSOUND_ROADSOUND_H_ */
