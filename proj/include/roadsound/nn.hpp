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

#ifndef ROADSOUND_NN_HPP_
#define ROADSOUND_NN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "roadsound/features.hpp"

namespace roadsound {

// Multi-input classifier: a stack of 'same'-padded 1D convolutions over
// time (coefficients are channels) followed by global average pooling, a
// dense layer over the global vector, concatenation, one hidden dense layer
// and a softmax output.
struct ModelConfig {
  std::size_t local_frames = 130;
  std::size_t local_coeffs = 40;
  std::size_t global_dim = kGlobalFeatureCount;
  std::vector<std::size_t> conv_channels = {48, 48};
  std::size_t kernel_size = 3;
  std::size_t global_hidden = 48;
  std::size_t head_hidden = 160;
  std::size_t n_classes = 4;
  std::uint64_t rng_seed = 0;
  // Inverted dropout on the concatenated vector and head hidden layer while
  // training; 0 disables it.
  double dropout = 0.0;

  void Validate() const;
  // Closed-form count of trainable scalars.
  std::size_t ParameterCount() const;

  bool operator==(const ModelConfig&) const = default;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> values;

  bool operator==(const Tensor&) const = default;
};

// Per-column z-score: (x - mean) / stddev.
struct Standardization {
  std::vector<float> mean;
  std::vector<float> stddev;

  static Standardization Identity(std::size_t dim);
  bool operator==(const Standardization&) const = default;
};

struct Prediction {
  std::vector<double> probabilities;
  std::size_t label = 0;
  double confidence = 0.0;
};

struct LabeledExample {
  const FeatureSet* features = nullptr;
  std::size_t label = 0;
};

// Gradient buffers aligned one-to-one with Model::parameters().
struct Gradients {
  std::vector<std::vector<double>> values;
};

struct LossAndGrad {
  double loss = 0.0;
  std::size_t correct = 0;  // argmax hits of the training-mode forward pass
  Gradients gradients;
};

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

inline constexpr double kProbabilityFloor = 1e-12;

class Model {
 public:
  // He-uniform weights drawn from config.rng_seed, zero biases.
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  Tensor& parameter(const std::string& name);
  const Tensor& parameter(const std::string& name) const;
  std::size_t TrainableParameterCount() const;

  // Adam first/second moments, aligned with parameters().
  std::vector<Tensor>& adam_m() { return adam_m_; }
  std::vector<Tensor>& adam_v() { return adam_v_; }
  const std::vector<Tensor>& adam_m() const { return adam_m_; }
  const std::vector<Tensor>& adam_v() const { return adam_v_; }
  std::uint64_t adam_step() const { return adam_step_; }
  void set_adam_step(std::uint64_t t) { adam_step_ = t; }

  // Applied inside Forward; identity until training fits them.
  Standardization local_standardization;
  Standardization global_standardization;
  // Extraction settings that produced the training features.
  FeatureConfig feature_config;

  // Standardizes raw features with the stored statistics and runs the
  // network. Throws kShapeMismatch when the inputs disagree with config().
  Prediction Forward(const FeatureSet& features) const;
  std::vector<double> Logits(const FeatureSet& features) const;
  // Output of the pooled convolutional branch.
  std::vector<double> LocalEmbedding(const FeatureSet& features) const;

  bool operator==(const Model&) const = default;

 private:
  ModelConfig config_;
  std::vector<Tensor> params_;
  std::vector<Tensor> adam_m_;
  std::vector<Tensor> adam_v_;
  std::uint64_t adam_step_ = 0;
};

std::vector<double> Softmax(std::span<const double> logits);
Prediction MakePrediction(std::vector<double> probabilities);

// Mean categorical cross-entropy over the batch (probabilities floored at
// kProbabilityFloor) and its gradient for every parameter. When
// `dropout_rng` is non-null and config().dropout > 0, dropout masks are
// drawn from it. Per-sample work may run on `jobs` threads; gradients are
// summed in batch order, so results do not depend on scheduling.
LossAndGrad LossAndGradients(const Model& model, std::span<const LabeledExample> batch,
                             std::mt19937_64* dropout_rng = nullptr, int jobs = 1);

// Mean cross-entropy only (no dropout).
double Loss(const Model& model, std::span<const LabeledExample> batch, int jobs = 1);

// Bias-corrected Adam update for step t >= 1.
void AdamStep(Model& model, const Gradients& gradients, const AdamOptions& options,
              std::uint64_t t);

// Checkpoint: magic, version, config block, standardization vectors, named
// float32 tensors (parameters then Adam moments), trailing CRC-32.
std::vector<std::uint8_t> EncodeCheckpoint(const Model& model);
Model DecodeCheckpoint(std::span<const std::uint8_t> bytes);
void SaveCheckpoint(const Model& model, const std::filesystem::path& path);
Model LoadCheckpoint(const std::filesystem::path& path);

// Throws kShapeMismatch unless the model was built for `expected`.
void RequireCompatible(const Model& model, const ModelConfig& expected);

}  // namespace roadsound

#endif  // ROADSOUND_NN_HPP_
