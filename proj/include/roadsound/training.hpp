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

#ifndef ROADSOUND_TRAINING_HPP_
#define ROADSOUND_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roadsound/features.hpp"
#include "roadsound/manifest.hpp"
#include "roadsound/metrics.hpp"
#include "roadsound/nn.hpp"

namespace roadsound {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t early_stop_patience = 8;
  double lr_initial = 1e-2;
  std::size_t lr_reduce_patience = 4;
  double lr_reduce_factor = 0.5;
  double lr_min = 1e-3;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  int jobs = 1;

  void Validate() const;
};

// Reduce-on-plateau and early-stopping bookkeeping over a stream of
// validation losses. An epoch improves when its loss is strictly below the
// best so far.
class PlateauMonitor {
 public:
  explicit PlateauMonitor(const TrainConfig& config);

  struct Decision {
    bool improved = false;
    bool lr_reduced = false;
    bool stop = false;
  };

  Decision Observe(double validation_loss);

  // Rate to use for the next epoch.
  double learning_rate() const { return lr_; }
  double best_loss() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }  // 1-based, 0 = none

 private:
  TrainConfig config_;
  double lr_;
  double best_;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t lr_wait_ = 0;
  std::size_t stop_wait_ = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;  // rate used during this epoch
  bool lr_reduced = false;     // reduction triggered at the end of this epoch
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  bool stopped_early = false;
};

// Extracted features for every manifest entry, in manifest order.
struct Dataset {
  std::vector<std::string> ids;
  std::vector<FeatureSet> features;
  std::vector<std::size_t> labels;
  std::vector<std::optional<int>> folds;
  FeatureConfig feature_config;

  std::size_t size() const { return features.size(); }
};

// Extracts (or loads from `cache_dir`, when given) features for every entry.
Dataset BuildDataset(const Manifest& manifest, const FeatureConfig& config,
                     const std::optional<std::filesystem::path>& cache_dir, int jobs);

// Stratified, group-aware fold assignment: an original and its augmented
// children share one fold; per class, fold sizes differ by at most one
// group. Throws kTooFewSamples when a present class has fewer than k groups.
Manifest KFoldSplit(const Manifest& manifest, int k, std::uint64_t seed);

ModelConfig ModelConfigFor(const FeatureConfig& features, std::uint64_t seed);

// z-score statistics of the local columns and global entries over `indices`.
void FitStandardization(Model& model, const Dataset& data,
                        const std::vector<std::size_t>& indices);

using EpochCallback = std::function<void(int fold, const EpochRecord&)>;

struct FoldResult {
  Model model;
  TrainHistory history;
};

// Trains on every fold except `fold` and validates on `fold`; restores the
// best-validation-loss weights before returning. Throws kTrainingDiverged on
// a non-finite loss and kEmptyFold when either side of the split is empty.
FoldResult TrainFold(const Dataset& data, int fold, const ModelConfig& model_config,
                     const TrainConfig& train_config, const EpochCallback& on_epoch = {});

struct LossAccuracy {
  double loss = 0.0;
  double accuracy = 0.0;
};
LossAccuracy EvaluateLoss(const Model& model, const Dataset& data,
                          const std::vector<std::size_t>& indices, int jobs);

EvalReport Evaluate(const Model& model, const Dataset& data, int fold, int jobs = 1);

struct CrossValidationResult {
  std::vector<EvalReport> folds;
  std::vector<TrainHistory> histories;
  std::vector<Model> models;
  EvalReport pooled;
  double mean_accuracy = 0.0;
};

// Runs TrainFold + Evaluate for each of the k folds already assigned in
// `data`.
CrossValidationResult CrossValidate(const Dataset& data, int k,
                                    const ModelConfig& model_config,
                                    const TrainConfig& train_config,
                                    const EpochCallback& on_epoch = {});

std::string FormatCrossValidationText(const CrossValidationResult& result);
std::string FormatCrossValidationJson(const CrossValidationResult& result);

}  // namespace roadsound

#endif  // ROADSOUND_TRAINING_HPP_
