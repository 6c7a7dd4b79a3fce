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

#include "roadsound/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <json.hpp>

#include "hash.hpp"
#include "parallel.hpp"
#include "roadsound/error.hpp"

namespace roadsound {

void TrainConfig::Validate() const {
  Require(epochs >= 1, "epochs must be positive");
  Require(early_stop_patience >= 1 && lr_reduce_patience >= 1, "patiences must be >= 1");
  Require(lr_min > 0 && lr_min <= lr_initial, "need 0 < lr_min <= lr_initial");
  Require(lr_reduce_factor > 0 && lr_reduce_factor < 1, "lr factor must be in (0, 1)");
  Require(batch_size >= 1, "batch size must be positive");
}

PlateauMonitor::PlateauMonitor(const TrainConfig& config)
    : config_(config),
      lr_(config.lr_initial),
      best_(std::numeric_limits<double>::infinity()) {}

PlateauMonitor::Decision PlateauMonitor::Observe(double validation_loss) {
  ++epoch_;
  Decision d;
  if (validation_loss < best_) {
    best_ = validation_loss;
    best_epoch_ = epoch_;
    lr_wait_ = 0;
    stop_wait_ = 0;
    d.improved = true;
    return d;
  }
  if (++lr_wait_ >= config_.lr_reduce_patience) {
    lr_wait_ = 0;
    if (lr_ > config_.lr_min) {
      lr_ = std::max(lr_ * config_.lr_reduce_factor, config_.lr_min);
      d.lr_reduced = true;
    }
  }
  d.stop = ++stop_wait_ >= config_.early_stop_patience;
  return d;
}

Dataset BuildDataset(const Manifest& manifest, const FeatureConfig& config,
                     const std::optional<std::filesystem::path>& cache_dir, int jobs) {
  const FeatureExtractor extractor(config);
  std::optional<FeatureCache> cache;
  if (cache_dir) cache.emplace(*cache_dir, config);

  Dataset data;
  data.feature_config = config;
  const std::size_t n = manifest.size();
  data.features.resize(n);
  detail::ParallelFor(n, jobs, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    if (cache) {
      if (auto hit = cache->Lookup(entry.path)) {
        data.features[i] = std::move(*hit);
        return;
      }
    }
    try {
      data.features[i] = extractor.Extract(LoadWav(entry.path));
    } catch (const Error& e) {
      throw Error(e.code(), "entry '" + entry.id + "': " + e.what());
    }
    if (cache) cache->Store(entry.path, data.features[i]);
  });
  for (const auto& e : manifest.entries) {
    data.ids.push_back(e.id);
    data.labels.push_back(static_cast<std::size_t>(e.label));
    data.folds.push_back(e.fold);
  }
  return data;
}

Manifest KFoldSplit(const Manifest& manifest, int k, std::uint64_t seed) {
  Require(k >= 2, "need at least two folds");
  manifest.Validate();

  // Groups per class in order of first appearance.
  std::map<std::string, std::size_t> group_class;
  std::array<std::vector<std::string>, kClassCount> class_groups;
  for (const auto& e : manifest.entries) {
    const auto cls = static_cast<std::size_t>(e.label);
    auto [it, inserted] = group_class.emplace(e.group(), cls);
    if (inserted) {
      class_groups[cls].push_back(e.group());
    } else if (it->second != cls) {
      Fail(ErrorCode::kInvalidArgument, "group '" + e.group() + "' mixes class labels");
    }
  }

  std::mt19937_64 rng(detail::Combine(seed, 0x6b666f6c64ULL));
  std::map<std::string, int> assignment;
  std::size_t offset = 0;
  for (auto c : kAllClasses) {
    auto& groups = class_groups[static_cast<std::size_t>(c)];
    if (groups.empty()) continue;
    if (groups.size() < static_cast<std::size_t>(k)) {
      Fail(ErrorCode::kTooFewSamples,
           "class " + std::string(ClassName(c)) + " has " + std::to_string(groups.size()) +
               " groups, fewer than " + std::to_string(k) + " folds");
    }
    std::shuffle(groups.begin(), groups.end(), rng);
    for (std::size_t i = 0; i < groups.size(); ++i) {
      assignment[groups[i]] = static_cast<int>((offset + i) % static_cast<std::size_t>(k));
    }
    offset += groups.size();
  }

  Manifest out = manifest;
  for (auto& e : out.entries) e.fold = assignment.at(e.group());
  return out;
}

ModelConfig ModelConfigFor(const FeatureConfig& features, std::uint64_t seed) {
  ModelConfig c;
  c.local_frames = features.frames();
  c.local_coeffs = features.coefficients();
  c.rng_seed = seed;
  return c;
}

void FitStandardization(Model& model, const Dataset& data,
                        const std::vector<std::size_t>& indices) {
  Require(!indices.empty(), "cannot fit standardization on no samples");
  const std::size_t cols = model.config().local_coeffs;
  std::vector<double> sum(cols, 0.0), sq(cols, 0.0);
  std::vector<double> gsum(kGlobalFeatureCount, 0.0), gsq(kGlobalFeatureCount, 0.0);
  double rows = 0.0;
  for (auto i : indices) {
    const auto& f = data.features[i];
    for (std::size_t t = 0; t < f.local.rows(); ++t) {
      const auto r = f.local.row(t);
      for (std::size_t c = 0; c < cols; ++c) sum[c] += r[c];
    }
    rows += static_cast<double>(f.local.rows());
    for (std::size_t g = 0; g < kGlobalFeatureCount; ++g) gsum[g] += f.global[g];
  }
  for (auto& v : sum) v /= rows;
  for (auto& v : gsum) v /= static_cast<double>(indices.size());
  for (auto i : indices) {
    const auto& f = data.features[i];
    for (std::size_t t = 0; t < f.local.rows(); ++t) {
      const auto r = f.local.row(t);
      for (std::size_t c = 0; c < cols; ++c) sq[c] += (r[c] - sum[c]) * (r[c] - sum[c]);
    }
    for (std::size_t g = 0; g < kGlobalFeatureCount; ++g) {
      gsq[g] += (f.global[g] - gsum[g]) * (f.global[g] - gsum[g]);
    }
  }
  auto finish = [](const std::vector<double>& mean, const std::vector<double>& ss,
                   double count) {
    Standardization s;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      const double sd = std::sqrt(ss[i] / count);
      s.mean.push_back(static_cast<float>(mean[i]));
      s.stddev.push_back(sd > 1e-12 && std::isfinite(sd) ? static_cast<float>(sd) : 1.0f);
    }
    return s;
  };
  model.local_standardization = finish(sum, sq, rows);
  model.global_standardization = finish(gsum, gsq, static_cast<double>(indices.size()));
}

namespace {

std::vector<LabeledExample> Examples(const Dataset& data, const std::vector<std::size_t>& idx) {
  std::vector<LabeledExample> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back({&data.features[i], data.labels[i]});
  return out;
}

void RequireFinite(double loss, int fold, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    Fail(ErrorCode::kTrainingDiverged, "non-finite loss in fold " + std::to_string(fold) +
                                           ", epoch " + std::to_string(epoch));
  }
}

}  // namespace

LossAccuracy EvaluateLoss(const Model& model, const Dataset& data,
                          const std::vector<std::size_t>& indices, int jobs) {
  Require(!indices.empty(), "nothing to evaluate");
  std::vector<double> losses(indices.size());
  std::vector<char> hits(indices.size());
  detail::ParallelFor(indices.size(), jobs, [&](std::size_t j) {
    const std::size_t i = indices[j];
    const Prediction p = model.Forward(data.features[i]);
    losses[j] = -std::log(std::max(p.probabilities[data.labels[i]], kProbabilityFloor));
    hits[j] = p.label == data.labels[i];
  });
  LossAccuracy out;
  std::size_t correct = 0;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    out.loss += losses[j];
    correct += hits[j] ? 1 : 0;
  }
  out.loss /= static_cast<double>(indices.size());
  out.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
  return out;
}

FoldResult TrainFold(const Dataset& data, int fold, const ModelConfig& model_config,
                     const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.Validate();
  std::vector<std::size_t> train, val;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.folds[i]) continue;
    (*data.folds[i] == fold ? val : train).push_back(i);
  }
  if (train.empty() || val.empty()) {
    Fail(ErrorCode::kEmptyFold, "fold " + std::to_string(fold) + " leaves an empty split");
  }

  Model model(model_config);
  model.feature_config = data.feature_config;
  FitStandardization(model, data, train);

  std::mt19937_64 order_rng(detail::Combine(cfg.seed, static_cast<std::uint64_t>(fold)));
  std::mt19937_64 dropout_rng(detail::Combine(order_rng(), 0x64726f70ULL));
  PlateauMonitor monitor(cfg);
  TrainHistory history;
  Model best = model;
  std::uint64_t step = model.adam_step();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double lr = monitor.learning_rate();
    std::shuffle(train.begin(), train.end(), order_rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < train.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(start + cfg.batch_size, train.size());
      const std::vector<std::size_t> idx(train.begin() + static_cast<std::ptrdiff_t>(start),
                                         train.begin() + static_cast<std::ptrdiff_t>(end));
      const auto batch = Examples(data, idx);
      const LossAndGrad lg = LossAndGradients(model, batch, &dropout_rng, cfg.jobs);
      RequireFinite(lg.loss, fold, epoch);
      loss_sum += lg.loss * static_cast<double>(batch.size());
      correct += lg.correct;
      AdamStep(model, lg.gradients, AdamOptions{lr}, ++step);
    }

    const LossAccuracy v = EvaluateLoss(model, data, val, cfg.jobs);
    RequireFinite(v.loss, fold, epoch);
    const auto decision = monitor.Observe(v.loss);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    rec.val_loss = v.loss;
    rec.val_accuracy = v.accuracy;
    rec.learning_rate = lr;
    rec.lr_reduced = decision.lr_reduced;
    history.epochs.push_back(rec);
    if (on_epoch) on_epoch(fold, rec);

    if (decision.improved) best = model;
    if (decision.stop) {
      history.stopped_early = epoch < cfg.epochs;
      break;
    }
  }
  history.best_epoch = monitor.best_epoch();
  history.best_val_loss = monitor.best_loss();
  return {std::move(best), std::move(history)};
}

EvalReport Evaluate(const Model& model, const Dataset& data, int fold, int jobs) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.folds[i] && *data.folds[i] == fold) idx.push_back(i);
  }
  if (idx.empty()) Fail(ErrorCode::kEmptyFold, "fold " + std::to_string(fold) + " is empty");
  std::vector<std::size_t> predicted(idx.size());
  detail::ParallelFor(idx.size(), jobs, [&](std::size_t j) {
    predicted[j] = model.Forward(data.features[idx[j]]).label;
  });
  ConfusionMatrix cm{};
  for (std::size_t j = 0; j < idx.size(); ++j) cm[data.labels[idx[j]]][predicted[j]]++;
  return ReportFromConfusion(cm, fold);
}

CrossValidationResult CrossValidate(const Dataset& data, int k, const ModelConfig& model_config,
                                    const TrainConfig& train_config,
                                    const EpochCallback& on_epoch) {
  Require(k >= 2, "need at least two folds");
  CrossValidationResult result;
  ConfusionMatrix pooled{};
  double acc_sum = 0.0;
  for (int fold = 0; fold < k; ++fold) {
    FoldResult fr = TrainFold(data, fold, model_config, train_config, on_epoch);
    EvalReport report = Evaluate(fr.model, data, fold, train_config.jobs);
    pooled = AddConfusion(pooled, report.confusion);
    acc_sum += report.accuracy;
    result.folds.push_back(report);
    result.histories.push_back(std::move(fr.history));
    result.models.push_back(std::move(fr.model));
  }
  result.pooled = ReportFromConfusion(pooled, -1);
  result.mean_accuracy = acc_sum / k;
  return result;
}

std::string FormatCrossValidationText(const CrossValidationResult& r) {
  std::string out;
  for (const auto& f : r.folds) out += FormatReportText(f) + "\n";
  out += FormatReportText(r.pooled);
  char line[96];
  std::snprintf(line, sizeof(line), "mean accuracy over %zu folds: %.4f\n", r.folds.size(),
                r.mean_accuracy);
  out += line;
  return out;
}

namespace {

nlohmann::ordered_json ReportJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["fold"] = r.fold;
  j["accuracy"] = r.accuracy;
  j["correct"] = r.correct;
  j["total"] = r.total;
  j["confusion"] = r.confusion;
  auto& classes = j["classes"];
  for (auto c : kAllClasses) {
    const auto& m = r.per_class[static_cast<std::size_t>(c)];
    classes[std::string(ClassName(c))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  return j;
}

}  // namespace

std::string FormatCrossValidationJson(const CrossValidationResult& r) {
  nlohmann::ordered_json j;
  j["folds"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    auto fold = ReportJson(r.folds[i]);
    const auto& h = r.histories[i];
    fold["best_epoch"] = h.best_epoch;
    fold["best_val_loss"] = h.best_val_loss;
    fold["stopped_early"] = h.stopped_early;
    auto& epochs = fold["history"] = nlohmann::ordered_json::array();
    for (const auto& e : h.epochs) {
      epochs.push_back({{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"train_accuracy", e.train_accuracy},
                        {"val_loss", e.val_loss},
                        {"val_accuracy", e.val_accuracy},
                        {"learning_rate", e.learning_rate},
                        {"lr_reduced", e.lr_reduced}});
    }
    j["folds"].push_back(std::move(fold));
  }
  j["pooled"] = ReportJson(r.pooled);
  j["mean_accuracy"] = r.mean_accuracy;
  return j.dump(2) + "\n";
}

}  // namespace roadsound
