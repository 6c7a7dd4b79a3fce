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

#include "roadsound/roadsound.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "byte_io.hpp"
#include "roadsound/audio.hpp"
#include "roadsound/augmentation.hpp"
#include "roadsound/error.hpp"
#include "roadsound/features.hpp"
#include "roadsound/manifest.hpp"
#include "roadsound/nn.hpp"
#include "roadsound/synth.hpp"
#include "roadsound/training.hpp"

namespace fs = std::filesystem;
using namespace roadsound;

struct roadsound_model {
  Model model;
  FeatureExtractor extractor;

  explicit roadsound_model(Model m)
      : model(std::move(m)), extractor(model.feature_config) {}
};

namespace {

thread_local std::string g_last_error;

roadsound_status StatusFor(ErrorCode code) {
  return static_cast<roadsound_status>(static_cast<int>(code) + 1);
}

// Runs `fn`, translating exceptions into a status and the thread's last
// error message.
template <typename Fn>
roadsound_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ROADSOUND_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return ROADSOUND_ERR_INTERNAL;
}

void RequirePointer(const void* p, const char* what) {
  if (p == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

FeatureKind KindFrom(roadsound_feature_kind k) {
  switch (k) {
    case ROADSOUND_FEATURES_MELSPEC: return FeatureKind::kMelSpectrogram;
    case ROADSOUND_FEATURES_MFCC: return FeatureKind::kMfcc;
    case ROADSOUND_FEATURES_GFCC: return FeatureKind::kGfcc;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown feature kind");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void FillPrediction(const Prediction& p, roadsound_prediction* out) {
  out->label = static_cast<int>(p.label);
  out->confidence = p.confidence;
  for (int c = 0; c < ROADSOUND_CLASS_COUNT; ++c) {
    out->probabilities[c] = static_cast<std::size_t>(c) < p.probabilities.size()
                                ? p.probabilities[static_cast<std::size_t>(c)]
                                : 0.0;
  }
}

// Uses the folds already stored in the manifest when they are complete and
// in range; otherwise assigns fresh ones.
Manifest WithFolds(const Manifest& m, int k, std::uint64_t seed) {
  const bool complete = std::all_of(m.entries.begin(), m.entries.end(), [&](const auto& e) {
    return e.fold && *e.fold >= 0 && *e.fold < k;
  });
  return complete ? m : KFoldSplit(m, k, seed);
}

fs::path Sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

}  // namespace

extern "C" {

const char* roadsound_version(void) { return "0.1.0"; }

const char* roadsound_status_name(roadsound_status status) {
  if (status == ROADSOUND_OK) return "Ok";
  if (status == ROADSOUND_ERR_INTERNAL) return "Internal";
  if (status > ROADSOUND_OK && status < ROADSOUND_ERR_INTERNAL) {
    return ErrorCodeName(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  }
  return "Unknown";
}

const char* roadsound_last_error(void) { return g_last_error.c_str(); }

void roadsound_string_free(char* s) { std::free(s); }

const char* roadsound_class_name(int label) {
  if (label < 0 || label >= ROADSOUND_CLASS_COUNT) return nullptr;
  return ClassName(static_cast<VehicleClass>(label)).data();
}

roadsound_status roadsound_synth_generate(const char* out_dir, size_t per_class, uint64_t seed,
                                          int jobs, size_t* n_written) {
  return Guard([&] {
    RequirePointer(out_dir, "out_dir");
    SynthSpec spec;
    spec.samples_per_class = per_class;
    spec.seed = seed;
    const Manifest m = GenerateCorpus(spec, out_dir, jobs);
    if (n_written) *n_written = m.size();
  });
}

void roadsound_augment_params_default(roadsound_augment_params* params) {
  if (params == nullptr) return;
  const AugmentationParams d;
  *params = {d.gain_min,    d.gain_max,   d.noise_rate_min, d.noise_rate_max, d.stretch_min,
             d.stretch_max, d.seed,       d.sample_rate,    d.seconds,        0};
}

roadsound_status roadsound_augment(const char* manifest_path, const char* out_dir,
                                   const char* out_manifest,
                                   const roadsound_augment_params* params,
                                   roadsound_failure_fn on_failure, void* user,
                                   roadsound_augment_summary* summary) {
  return Guard([&] {
    RequirePointer(manifest_path, "manifest_path");
    RequirePointer(out_dir, "out_dir");
    roadsound_augment_params p;
    roadsound_augment_params_default(&p);
    if (params) p = *params;
    AugmentationParams ap;
    ap.gain_min = p.gain_min;
    ap.gain_max = p.gain_max;
    ap.noise_rate_min = p.noise_rate_min;
    ap.noise_rate_max = p.noise_rate_max;
    ap.stretch_min = p.stretch_min;
    ap.stretch_max = p.stretch_max;
    ap.seed = p.seed;
    ap.sample_rate = p.sample_rate;
    ap.seconds = p.seconds;

    const Manifest input = LoadManifest(manifest_path);
    const AugmentResult result = AugmentCorpus(input, out_dir, ap, p.jobs);
    const fs::path manifest_out =
        out_manifest ? fs::path(out_manifest) : fs::path(out_dir) / "manifest.csv";
    SaveManifest(result.manifest, manifest_out);
    if (on_failure) {
      for (const auto& f : result.failures) on_failure(f.entry_id.c_str(), f.message.c_str(), user);
    }
    if (summary) *summary = {input.size(), result.manifest.size(), result.failures.size()};
  });
}

roadsound_status roadsound_extract(const char* manifest_path, roadsound_feature_kind kind,
                                   const char* cache_dir, int jobs,
                                   roadsound_extract_summary* summary) {
  return Guard([&] {
    RequirePointer(manifest_path, "manifest_path");
    const Manifest m = LoadManifest(manifest_path);
    if (m.size() == 0) Fail(ErrorCode::kInvalidArgument, "manifest has no entries");
    FeatureConfig config;
    config.kind = KindFrom(kind);
    std::optional<fs::path> cache;
    if (cache_dir) cache = fs::path(cache_dir);
    const Dataset data = BuildDataset(m, config, cache, jobs);
    if (summary) {
      *summary = {data.size(), config.frames(), config.coefficients(), kGlobalFeatureCount};
    }
  });
}

void roadsound_train_options_default(roadsound_train_options* options) {
  if (options == nullptr) return;
  const TrainConfig d;
  *options = {ROADSOUND_FEATURES_GFCC,
              5,
              d.epochs,
              d.early_stop_patience,
              d.lr_initial,
              d.lr_reduce_patience,
              d.lr_reduce_factor,
              d.lr_min,
              d.batch_size,
              0.0,
              d.seed,
              0,
              nullptr};
}

roadsound_status roadsound_cross_validate(const char* manifest_path, const char* out_checkpoint,
                                          const roadsound_train_options* options,
                                          roadsound_epoch_fn on_epoch, void* user,
                                          char** report_text, double* mean_accuracy) {
  return Guard([&] {
    RequirePointer(manifest_path, "manifest_path");
    RequirePointer(out_checkpoint, "out_checkpoint");
    roadsound_train_options o;
    roadsound_train_options_default(&o);
    if (options) o = *options;
    Require(o.folds >= 2, "need at least two folds");
    Require(o.dropout >= 0.0 && o.dropout < 1.0, "dropout must be in [0, 1)");

    TrainConfig tc;
    tc.epochs = o.epochs;
    tc.early_stop_patience = o.early_stop_patience;
    tc.lr_initial = o.lr_initial;
    tc.lr_reduce_patience = o.lr_reduce_patience;
    tc.lr_reduce_factor = o.lr_reduce_factor;
    tc.lr_min = o.lr_min;
    tc.batch_size = o.batch_size;
    tc.seed = o.seed;
    tc.jobs = o.jobs;
    tc.Validate();

    FeatureConfig fc;
    fc.kind = KindFrom(o.features);
    const Manifest m = WithFolds(LoadManifest(manifest_path), o.folds, o.seed);
    std::optional<fs::path> cache;
    if (o.cache_dir) cache = fs::path(o.cache_dir);
    const Dataset data = BuildDataset(m, fc, cache, o.jobs);

    ModelConfig mc = ModelConfigFor(fc, o.seed);
    mc.dropout = o.dropout;
    EpochCallback callback;
    if (on_epoch) {
      callback = [&](int fold, const EpochRecord& r) {
        const roadsound_epoch_info info{fold,         r.epoch,    r.train_loss,
                                        r.train_accuracy, r.val_loss, r.val_accuracy,
                                        r.learning_rate};
        on_epoch(&info, user);
      };
    }
    const CrossValidationResult cv = CrossValidate(data, o.folds, mc, tc, callback);

    const fs::path out(out_checkpoint);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::size_t best = 0;
    for (std::size_t i = 0; i < cv.models.size(); ++i) {
      SaveCheckpoint(cv.models[i], Sibling(out, ".fold" + std::to_string(i) + ".ckpt"));
      if (cv.folds[i].accuracy > cv.folds[best].accuracy) best = i;
    }
    SaveCheckpoint(cv.models[best], out);
    const std::string text = FormatCrossValidationText(cv);
    const std::string json = FormatCrossValidationJson(cv);
    detail::WriteFileBytes(Sibling(out, ".report.txt").string(),
                           {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    detail::WriteFileBytes(Sibling(out, ".report.json").string(),
                           {reinterpret_cast<const std::uint8_t*>(json.data()), json.size()});
    if (mean_accuracy) *mean_accuracy = cv.mean_accuracy;
    if (report_text) *report_text = CopyString(text);
  });
}

roadsound_status roadsound_model_load(const char* path, roadsound_model** out) {
  return Guard([&] {
    RequirePointer(path, "path");
    RequirePointer(out, "out");
    *out = nullptr;
    Model m = LoadCheckpoint(path);
    *out = new roadsound_model(std::move(m));
  });
}

void roadsound_model_free(roadsound_model* model) { delete model; }

roadsound_feature_kind roadsound_model_feature_kind(const roadsound_model* model) {
  if (model == nullptr) return ROADSOUND_FEATURES_GFCC;
  return static_cast<roadsound_feature_kind>(model->model.feature_config.kind);
}

roadsound_status roadsound_model_predict_file(const roadsound_model* model, const char* wav_path,
                                              roadsound_prediction* out) {
  return Guard([&] {
    RequirePointer(model, "model");
    RequirePointer(wav_path, "wav_path");
    RequirePointer(out, "out");
    FillPrediction(model->model.Forward(model->extractor.Extract(LoadWav(wav_path))), out);
  });
}

roadsound_status roadsound_model_predict_wav(const roadsound_model* model, const uint8_t* bytes,
                                             size_t size, roadsound_prediction* out) {
  return Guard([&] {
    RequirePointer(model, "model");
    RequirePointer(out, "out");
    if (bytes == nullptr && size > 0) Fail(ErrorCode::kInvalidArgument, "bytes must not be null");
    const AudioClip clip = DecodeWav({bytes, size});
    FillPrediction(model->model.Forward(model->extractor.Extract(clip)), out);
  });
}

}  // extern "C"
