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

#include "roadsound/nn.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>

#include "byte_io.hpp"
#include "parallel.hpp"
#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

using Params = std::vector<std::vector<double>>;

// Parameter slots: conv l -> (2l, 2l+1); then global, head, output pairs.
struct Slots {
  explicit Slots(std::size_t conv_layers) : conv(conv_layers) {}
  std::size_t conv;
  std::size_t conv_w(std::size_t l) const { return 2 * l; }
  std::size_t conv_b(std::size_t l) const { return 2 * l + 1; }
  std::size_t global_w() const { return 2 * conv; }
  std::size_t global_b() const { return 2 * conv + 1; }
  std::size_t head_w() const { return 2 * conv + 2; }
  std::size_t head_b() const { return 2 * conv + 3; }
  std::size_t out_w() const { return 2 * conv + 4; }
  std::size_t out_b() const { return 2 * conv + 5; }
};

Params ToDouble(const std::vector<Tensor>& tensors) {
  Params out(tensors.size());
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    out[i].assign(tensors[i].values.begin(), tensors[i].values.end());
  }
  return out;
}

std::size_t ConvWidth(const ModelConfig& c) { return c.conv_channels.back(); }

// Everything the backward pass needs from one forward pass.
struct Trace {
  std::vector<std::vector<double>> act;  // act[0] input, act[l+1] relu(conv l)
  std::vector<double> pooled;
  std::vector<double> global_in;
  std::vector<double> global_out;  // relu(global dense)
  std::vector<double> concat;      // after dropout
  std::vector<double> concat_mask;
  std::vector<double> hidden_relu;
  std::vector<double> hidden;      // after dropout
  std::vector<double> hidden_mask;
  std::vector<double> logits;
};

void CheckShapes(const ModelConfig& c, const FeatureSet& f) {
  if (f.local.rows() != c.local_frames || f.local.cols() != c.local_coeffs ||
      c.global_dim != kGlobalFeatureCount) {
    Fail(ErrorCode::kShapeMismatch,
         "features are " + std::to_string(f.local.rows()) + "x" +
             std::to_string(f.local.cols()) + ", model expects " +
             std::to_string(c.local_frames) + "x" + std::to_string(c.local_coeffs));
  }
}

void Standardize(const Standardization& s, std::span<const float> raw,
                 std::span<double> out) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = (static_cast<double>(raw[i]) - s.mean[i]) / s.stddev[i];
  }
}

// 'same' zero-padded convolution over time; weight layout (out, kernel, in).
void ConvForward(const std::vector<double>& in, std::size_t frames, std::size_t in_ch,
                 const std::vector<double>& w, const std::vector<double>& b,
                 std::size_t out_ch, std::size_t kernel, std::vector<double>& out) {
  const auto pad = static_cast<std::ptrdiff_t>(kernel / 2);
  out.assign(frames * out_ch, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t o = 0; o < out_ch; ++o) {
      double acc = b[o];
      for (std::size_t k = 0; k < kernel; ++k) {
        const auto s = static_cast<std::ptrdiff_t>(t + k) - pad;
        if (s < 0 || s >= static_cast<std::ptrdiff_t>(frames)) continue;
        const double* x = &in[static_cast<std::size_t>(s) * in_ch];
        const double* wk = &w[(o * kernel + k) * in_ch];
        for (std::size_t i = 0; i < in_ch; ++i) acc += wk[i] * x[i];
      }
      out[t * out_ch + o] = std::max(acc, 0.0);
    }
  }
}

void ConvBackward(const std::vector<double>& in, std::size_t frames, std::size_t in_ch,
                  const std::vector<double>& w, std::size_t out_ch, std::size_t kernel,
                  const std::vector<double>& d_pre, std::vector<double>& dw,
                  std::vector<double>& db, std::vector<double>* d_in) {
  const auto pad = static_cast<std::ptrdiff_t>(kernel / 2);
  if (d_in) d_in->assign(frames * in_ch, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t o = 0; o < out_ch; ++o) {
      const double d = d_pre[t * out_ch + o];
      if (d == 0.0) continue;
      db[o] += d;
      for (std::size_t k = 0; k < kernel; ++k) {
        const auto s = static_cast<std::ptrdiff_t>(t + k) - pad;
        if (s < 0 || s >= static_cast<std::ptrdiff_t>(frames)) continue;
        const std::size_t row = static_cast<std::size_t>(s) * in_ch;
        const double* x = &in[row];
        const double* wk = &w[(o * kernel + k) * in_ch];
        double* dwk = &dw[(o * kernel + k) * in_ch];
        for (std::size_t i = 0; i < in_ch; ++i) dwk[i] += d * x[i];
        if (d_in) {
          double* dx = &(*d_in)[row];
          for (std::size_t i = 0; i < in_ch; ++i) dx[i] += d * wk[i];
        }
      }
    }
  }
}

// y = W x + b with W laid out (out, in).
void Dense(const std::vector<double>& w, const std::vector<double>& b,
           std::span<const double> x, std::vector<double>& y, bool relu) {
  const std::size_t out = b.size();
  const std::size_t in = x.size();
  y.assign(out, 0.0);
  for (std::size_t j = 0; j < out; ++j) {
    double acc = b[j];
    const double* row = &w[j * in];
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[j] = relu ? std::max(acc, 0.0) : acc;
  }
}

void DenseBackward(const std::vector<double>& w, std::span<const double> x,
                   std::span<const double> dy, std::vector<double>& dw,
                   std::vector<double>& db, std::vector<double>* dx) {
  const std::size_t in = x.size();
  if (dx) dx->assign(in, 0.0);
  for (std::size_t j = 0; j < dy.size(); ++j) {
    const double d = dy[j];
    if (d == 0.0) continue;
    db[j] += d;
    const double* row = &w[j * in];
    double* drow = &dw[j * in];
    for (std::size_t i = 0; i < in; ++i) drow[i] += d * x[i];
    if (dx) {
      for (std::size_t i = 0; i < in; ++i) (*dx)[i] += d * row[i];
    }
  }
}

std::vector<double> DropoutMask(std::size_t n, double rate, std::mt19937_64* rng) {
  if (!rng || rate <= 0.0) return {};
  std::vector<double> mask(n);
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = keep(*rng) ? scale : 0.0;
  return mask;
}

void RunForward(const Model& model, const Params& p, const FeatureSet& f,
                std::mt19937_64* dropout_rng, Trace& tr) {
  const ModelConfig& c = model.config();
  CheckShapes(c, f);
  const Slots slot(c.conv_channels.size());
  const std::size_t frames = c.local_frames;

  tr.act.resize(c.conv_channels.size() + 1);
  tr.act[0].resize(frames * c.local_coeffs);
  for (std::size_t t = 0; t < frames; ++t) {
    Standardize(model.local_standardization, f.local.row(t),
                std::span(tr.act[0]).subspan(t * c.local_coeffs, c.local_coeffs));
  }
  std::size_t in_ch = c.local_coeffs;
  for (std::size_t l = 0; l < c.conv_channels.size(); ++l) {
    ConvForward(tr.act[l], frames, in_ch, p[slot.conv_w(l)], p[slot.conv_b(l)],
                c.conv_channels[l], c.kernel_size, tr.act[l + 1]);
    in_ch = c.conv_channels[l];
  }
  tr.pooled.assign(in_ch, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t o = 0; o < in_ch; ++o) tr.pooled[o] += tr.act.back()[t * in_ch + o];
  }
  for (double& v : tr.pooled) v /= static_cast<double>(frames);

  tr.global_in.resize(c.global_dim);
  Standardize(model.global_standardization, f.global, tr.global_in);
  Dense(p[slot.global_w()], p[slot.global_b()], tr.global_in, tr.global_out, true);

  tr.concat = tr.pooled;
  tr.concat.insert(tr.concat.end(), tr.global_out.begin(), tr.global_out.end());
  tr.concat_mask = DropoutMask(tr.concat.size(), c.dropout, dropout_rng);
  for (std::size_t i = 0; i < tr.concat_mask.size(); ++i) tr.concat[i] *= tr.concat_mask[i];

  Dense(p[slot.head_w()], p[slot.head_b()], tr.concat, tr.hidden_relu, true);
  tr.hidden = tr.hidden_relu;
  tr.hidden_mask = DropoutMask(tr.hidden.size(), c.dropout, dropout_rng);
  for (std::size_t i = 0; i < tr.hidden_mask.size(); ++i) tr.hidden[i] *= tr.hidden_mask[i];

  Dense(p[slot.out_w()], p[slot.out_b()], tr.hidden, tr.logits, false);
}

void RunBackward(const Model& model, const Params& p, const Trace& tr,
                 std::span<const double> d_logits, Params& g) {
  const ModelConfig& c = model.config();
  const Slots slot(c.conv_channels.size());
  const std::size_t frames = c.local_frames;

  std::vector<double> d_hidden;
  DenseBackward(p[slot.out_w()], tr.hidden, d_logits, g[slot.out_w()], g[slot.out_b()],
                &d_hidden);
  for (std::size_t i = 0; i < d_hidden.size(); ++i) {
    if (!tr.hidden_mask.empty()) d_hidden[i] *= tr.hidden_mask[i];
    if (tr.hidden_relu[i] <= 0.0) d_hidden[i] = 0.0;
  }

  std::vector<double> d_concat;
  DenseBackward(p[slot.head_w()], tr.concat, d_hidden, g[slot.head_w()], g[slot.head_b()],
                &d_concat);
  for (std::size_t i = 0; i < tr.concat_mask.size(); ++i) d_concat[i] *= tr.concat_mask[i];

  const std::size_t width = ConvWidth(c);
  std::vector<double> d_global(d_concat.begin() + static_cast<std::ptrdiff_t>(width),
                               d_concat.end());
  for (std::size_t i = 0; i < d_global.size(); ++i) {
    if (tr.global_out[i] <= 0.0) d_global[i] = 0.0;
  }
  DenseBackward(p[slot.global_w()], tr.global_in, d_global, g[slot.global_w()],
                g[slot.global_b()], nullptr);

  // Pooling spreads the gradient evenly over frames.
  std::vector<double> d_act(frames * width);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t o = 0; o < width; ++o) {
      d_act[t * width + o] = d_concat[o] / static_cast<double>(frames);
    }
  }
  for (std::size_t l = c.conv_channels.size(); l-- > 0;) {
    const std::size_t out_ch = c.conv_channels[l];
    const std::size_t in_ch = l == 0 ? c.local_coeffs : c.conv_channels[l - 1];
    const auto& out_act = tr.act[l + 1];
    for (std::size_t i = 0; i < d_act.size(); ++i) {
      if (out_act[i] <= 0.0) d_act[i] = 0.0;
    }
    std::vector<double> d_in;
    ConvBackward(tr.act[l], frames, in_ch, p[slot.conv_w(l)], out_ch, c.kernel_size, d_act,
                 g[slot.conv_w(l)], g[slot.conv_b(l)], l == 0 ? nullptr : &d_in);
    d_act = std::move(d_in);
  }
}

Params ZerosLike(const std::vector<Tensor>& tensors) {
  Params g(tensors.size());
  for (std::size_t i = 0; i < tensors.size(); ++i) g[i].assign(tensors[i].values.size(), 0.0);
  return g;
}

}  // namespace

void ModelConfig::Validate() const {
  Require(n_classes >= 2, "need at least two classes");
  Require(kernel_size % 2 == 1, "kernel size must be odd");
  Require(!conv_channels.empty(), "need at least one convolution layer");
  for (auto ch : conv_channels) Require(ch >= 1, "channel counts must be positive");
  Require(local_frames >= 1 && local_coeffs >= 1 && global_dim >= 1,
          "input shape must be positive");
  Require(global_hidden >= 1 && head_hidden >= 1, "hidden widths must be positive");
  Require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
}

std::size_t ModelConfig::ParameterCount() const {
  std::size_t total = 0;
  std::size_t in = local_coeffs;
  for (auto ch : conv_channels) {
    total += in * kernel_size * ch + ch;
    in = ch;
  }
  total += global_dim * global_hidden + global_hidden;
  const std::size_t concat = in + global_hidden;
  total += concat * head_hidden + head_hidden;
  total += head_hidden * n_classes + n_classes;
  return total;
}

Standardization Standardization::Identity(std::size_t dim) {
  return {std::vector<float>(dim, 0.0f), std::vector<float>(dim, 1.0f)};
}

Model::Model(const ModelConfig& config) : config_(config) {
  config_.Validate();
  local_standardization = Standardization::Identity(config_.local_coeffs);
  global_standardization = Standardization::Identity(config_.global_dim);
  feature_config.n_coeffs = config_.local_coeffs;

  std::mt19937_64 rng(config_.rng_seed);
  auto add = [&](std::string name, std::vector<std::size_t> shape, std::size_t fan_in) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    Tensor t{std::move(name), std::move(shape), std::vector<float>(n, 0.0f)};
    if (fan_in > 0) {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (float& v : t.values) v = static_cast<float>(dist(rng));
    }
    params_.push_back(std::move(t));
  };

  std::size_t in = config_.local_coeffs;
  for (std::size_t l = 0; l < config_.conv_channels.size(); ++l) {
    const std::size_t out = config_.conv_channels[l];
    const std::string prefix = "conv" + std::to_string(l);
    add(prefix + ".weight", {out, config_.kernel_size, in}, in * config_.kernel_size);
    add(prefix + ".bias", {out}, 0);
    in = out;
  }
  add("global.weight", {config_.global_hidden, config_.global_dim}, config_.global_dim);
  add("global.bias", {config_.global_hidden}, 0);
  const std::size_t concat = in + config_.global_hidden;
  add("head.weight", {config_.head_hidden, concat}, concat);
  add("head.bias", {config_.head_hidden}, 0);
  add("output.weight", {config_.n_classes, config_.head_hidden}, config_.head_hidden);
  add("output.bias", {config_.n_classes}, 0);

  for (const auto& t : params_) {
    adam_m_.push_back({"adam_m." + t.name, t.shape, std::vector<float>(t.values.size())});
    adam_v_.push_back({"adam_v." + t.name, t.shape, std::vector<float>(t.values.size())});
  }
}

Tensor& Model::parameter(const std::string& name) {
  for (auto& t : params_) {
    if (t.name == name) return t;
  }
  Fail(ErrorCode::kInvalidArgument, "no parameter named " + name);
}

const Tensor& Model::parameter(const std::string& name) const {
  return const_cast<Model*>(this)->parameter(name);
}

std::size_t Model::TrainableParameterCount() const {
  std::size_t n = 0;
  for (const auto& t : params_) n += t.values.size();
  return n;
}

std::vector<double> Model::Logits(const FeatureSet& features) const {
  const Params p = ToDouble(params_);
  Trace tr;
  RunForward(*this, p, features, nullptr, tr);
  return tr.logits;
}

Prediction Model::Forward(const FeatureSet& features) const {
  return MakePrediction(Softmax(Logits(features)));
}

std::vector<double> Model::LocalEmbedding(const FeatureSet& features) const {
  const Params p = ToDouble(params_);
  Trace tr;
  RunForward(*this, p, features, nullptr, tr);
  return tr.pooled;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

Prediction MakePrediction(std::vector<double> probabilities) {
  Prediction out;
  out.label = static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
  out.confidence = probabilities[out.label];
  out.probabilities = std::move(probabilities);
  return out;
}

LossAndGrad LossAndGradients(const Model& model, std::span<const LabeledExample> batch,
                             std::mt19937_64* dropout_rng, int jobs) {
  Require(!batch.empty(), "batch must not be empty");
  const Params p = ToDouble(model.parameters());
  const std::size_t n = batch.size();
  const double scale = 1.0 / static_cast<double>(n);

  const bool dropout = dropout_rng && model.config().dropout > 0.0;
  std::vector<std::uint64_t> seeds(n);
  if (dropout) {
    for (auto& s : seeds) s = (*dropout_rng)();
  }

  std::vector<Params> per_sample(n);
  std::vector<double> losses(n);
  std::vector<char> hits(n, 0);
  detail::ParallelFor(n, jobs, [&](std::size_t b) {
    const auto& ex = batch[b];
    Require(ex.label < model.config().n_classes, "label out of range");
    std::mt19937_64 rng(seeds[b]);
    Trace tr;
    RunForward(model, p, *ex.features, dropout ? &rng : nullptr, tr);
    std::vector<double> probs = Softmax(tr.logits);
    losses[b] = -std::log(std::max(probs[ex.label], kProbabilityFloor));
    hits[b] = MakePrediction(probs).label == ex.label;
    for (double& v : probs) v *= scale;
    probs[ex.label] -= scale;
    per_sample[b] = ZerosLike(model.parameters());
    RunBackward(model, p, tr, probs, per_sample[b]);
  });

  LossAndGrad out;
  out.gradients.values = ZerosLike(model.parameters());
  for (std::size_t b = 0; b < n; ++b) {
    out.loss += losses[b];
    out.correct += hits[b] ? 1 : 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto& dst = out.gradients.values[i];
      const auto& src = per_sample[b][i];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  }
  out.loss *= scale;
  return out;
}

double Loss(const Model& model, std::span<const LabeledExample> batch, int jobs) {
  Require(!batch.empty(), "batch must not be empty");
  const Params p = ToDouble(model.parameters());
  std::vector<double> losses(batch.size());
  detail::ParallelFor(batch.size(), jobs, [&](std::size_t b) {
    Trace tr;
    RunForward(model, p, *batch[b].features, nullptr, tr);
    const auto probs = Softmax(tr.logits);
    losses[b] = -std::log(std::max(probs.at(batch[b].label), kProbabilityFloor));
  });
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(batch.size());
}

void AdamStep(Model& model, const Gradients& gradients, const AdamOptions& o,
              std::uint64_t t) {
  Require(t >= 1, "Adam step index starts at 1");
  auto& params = model.parameters();
  Require(gradients.values.size() == params.size(), "gradient count mismatch");
  const double correct1 = 1.0 - std::pow(o.beta1, static_cast<double>(t));
  const double correct2 = 1.0 - std::pow(o.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& w = params[i].values;
    auto& m = model.adam_m()[i].values;
    auto& v = model.adam_v()[i].values;
    const auto& g = gradients.values[i];
    Require(g.size() == w.size(), "gradient shape mismatch for " + params[i].name);
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double mj = o.beta1 * m[j] + (1.0 - o.beta1) * g[j];
      const double vj = o.beta2 * v[j] + (1.0 - o.beta2) * g[j] * g[j];
      m[j] = static_cast<float>(mj);
      v[j] = static_cast<float>(vj);
      const double update = o.learning_rate * (mj / correct1) / (std::sqrt(vj / correct2) + o.epsilon);
      w[j] = static_cast<float>(static_cast<double>(w[j]) - update);
    }
  }
  model.set_adam_step(t);
}

namespace {

void PutFloats(detail::ByteWriter& w, const std::vector<float>& v) {
  w.Put(static_cast<std::uint32_t>(v.size()));
  for (float x : v) w.Put(x);
}

std::vector<float> GetFloats(detail::ByteReader& r) {
  std::vector<float> v(r.Get<std::uint32_t>());
  for (float& x : v) x = r.Get<float>();
  return v;
}

void PutTensor(detail::ByteWriter& w, const Tensor& t) {
  w.PutString(t.name);
  w.Put(static_cast<std::uint32_t>(t.shape.size()));
  for (auto d : t.shape) w.Put(static_cast<std::uint32_t>(d));
  for (float x : t.values) w.Put(x);
}

void ReadTensorInto(detail::ByteReader& r, Tensor& expected) {
  const std::string name = r.GetString();
  std::vector<std::size_t> shape(r.Get<std::uint32_t>());
  for (auto& d : shape) d = r.Get<std::uint32_t>();
  if (name != expected.name || shape != expected.shape) {
    Fail(ErrorCode::kShapeMismatch,
         "checkpoint tensor '" + name + "' does not match expected '" + expected.name + "'");
  }
  for (float& x : expected.values) x = r.Get<float>();
}

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const Model& model) {
  const ModelConfig& c = model.config();
  const FeatureConfig& f = model.feature_config;
  detail::ByteWriter w;
  w.PutTag("RSCK");
  w.Put(kCheckpointVersion);

  w.Put(static_cast<std::uint32_t>(c.local_frames));
  w.Put(static_cast<std::uint32_t>(c.local_coeffs));
  w.Put(static_cast<std::uint32_t>(c.global_dim));
  w.Put(static_cast<std::uint32_t>(c.conv_channels.size()));
  for (auto ch : c.conv_channels) w.Put(static_cast<std::uint32_t>(ch));
  w.Put(static_cast<std::uint32_t>(c.kernel_size));
  w.Put(static_cast<std::uint32_t>(c.global_hidden));
  w.Put(static_cast<std::uint32_t>(c.head_hidden));
  w.Put(static_cast<std::uint32_t>(c.n_classes));
  w.Put(c.rng_seed);
  w.Put(c.dropout);

  w.Put(static_cast<std::uint32_t>(f.kind));
  w.Put(static_cast<std::uint32_t>(f.stft.window_size));
  w.Put(static_cast<std::uint32_t>(f.stft.hop_size));
  w.Put(static_cast<std::uint32_t>(f.stft.fft_size));
  w.Put(f.sample_rate);
  w.Put(f.seconds);
  w.Put(f.pre_emphasis);
  w.Put(static_cast<std::uint32_t>(f.n_mels));
  w.Put(static_cast<std::uint32_t>(f.n_filters));
  w.Put(static_cast<std::uint32_t>(f.n_coeffs));

  w.Put(model.adam_step());
  PutFloats(w, model.local_standardization.mean);
  PutFloats(w, model.local_standardization.stddev);
  PutFloats(w, model.global_standardization.mean);
  PutFloats(w, model.global_standardization.stddev);

  const auto& params = model.parameters();
  w.Put(static_cast<std::uint32_t>(params.size() * 3));
  for (const auto& t : params) PutTensor(w, t);
  for (const auto& t : model.adam_m()) PutTensor(w, t);
  for (const auto& t : model.adam_v()) PutTensor(w, t);

  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, w.bytes().data(), static_cast<uInt>(w.size())));
  w.Put(crc);
  return std::move(w.bytes());
}

Model DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) Fail(ErrorCode::kChecksumMismatch, "checkpoint is truncated");
  const auto body = bytes.first(bytes.size() - 4);
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), 4);
  if (static_cast<std::uint32_t>(crc32(0L, body.data(), static_cast<uInt>(body.size()))) !=
      stored) {
    Fail(ErrorCode::kChecksumMismatch, "checkpoint checksum mismatch");
  }

  detail::ByteReader r(body, ErrorCode::kChecksumMismatch);
  if (!r.TagIs("RSCK")) Fail(ErrorCode::kVersionUnsupported, "not a checkpoint file");
  const auto version = r.Get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    Fail(ErrorCode::kVersionUnsupported,
         "checkpoint version " + std::to_string(version) + " is not supported");
  }

  ModelConfig c;
  c.local_frames = r.Get<std::uint32_t>();
  c.local_coeffs = r.Get<std::uint32_t>();
  c.global_dim = r.Get<std::uint32_t>();
  c.conv_channels.resize(r.Get<std::uint32_t>());
  for (auto& ch : c.conv_channels) ch = r.Get<std::uint32_t>();
  c.kernel_size = r.Get<std::uint32_t>();
  c.global_hidden = r.Get<std::uint32_t>();
  c.head_hidden = r.Get<std::uint32_t>();
  c.n_classes = r.Get<std::uint32_t>();
  c.rng_seed = r.Get<std::uint64_t>();
  c.dropout = r.Get<double>();

  FeatureConfig f;
  const auto kind = r.Get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(FeatureKind::kGfcc)) {
    Fail(ErrorCode::kVersionUnsupported, "unknown feature kind in checkpoint");
  }
  f.kind = static_cast<FeatureKind>(kind);
  f.stft.window_size = r.Get<std::uint32_t>();
  f.stft.hop_size = r.Get<std::uint32_t>();
  f.stft.fft_size = r.Get<std::uint32_t>();
  f.sample_rate = r.Get<double>();
  f.seconds = r.Get<double>();
  f.pre_emphasis = r.Get<double>();
  f.n_mels = r.Get<std::uint32_t>();
  f.n_filters = r.Get<std::uint32_t>();
  f.n_coeffs = r.Get<std::uint32_t>();

  std::unique_ptr<Model> model;
  try {
    model = std::make_unique<Model>(c);
  } catch (const Error& e) {
    Fail(ErrorCode::kShapeMismatch, std::string("invalid model config: ") + e.what());
  }
  model->feature_config = f;
  model->set_adam_step(r.Get<std::uint64_t>());
  model->local_standardization.mean = GetFloats(r);
  model->local_standardization.stddev = GetFloats(r);
  model->global_standardization.mean = GetFloats(r);
  model->global_standardization.stddev = GetFloats(r);
  if (model->local_standardization.mean.size() != c.local_coeffs ||
      model->local_standardization.stddev.size() != c.local_coeffs ||
      model->global_standardization.mean.size() != c.global_dim ||
      model->global_standardization.stddev.size() != c.global_dim) {
    Fail(ErrorCode::kShapeMismatch, "standardization vectors do not match the config");
  }

  const auto count = r.Get<std::uint32_t>();
  if (count != model->parameters().size() * 3) {
    Fail(ErrorCode::kShapeMismatch, "checkpoint tensor count does not match the config");
  }
  for (auto& t : model->parameters()) ReadTensorInto(r, t);
  for (auto& t : model->adam_m()) ReadTensorInto(r, t);
  for (auto& t : model->adam_v()) ReadTensorInto(r, t);
  if (r.remaining() != 0) Fail(ErrorCode::kShapeMismatch, "trailing bytes in checkpoint");
  return std::move(*model);
}

void SaveCheckpoint(const Model& model, const std::filesystem::path& path) {
  detail::WriteFileBytes(path.string(), EncodeCheckpoint(model));
}

Model LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(detail::ReadFileBytes(path.string()));
}

void RequireCompatible(const Model& model, const ModelConfig& expected) {
  const ModelConfig& c = model.config();
  if (c.local_frames != expected.local_frames || c.local_coeffs != expected.local_coeffs ||
      c.global_dim != expected.global_dim || c.conv_channels != expected.conv_channels ||
      c.kernel_size != expected.kernel_size || c.global_hidden != expected.global_hidden ||
      c.head_hidden != expected.head_hidden || c.n_classes != expected.n_classes) {
    Fail(ErrorCode::kShapeMismatch, "model architecture differs from the expected config");
  }
}

}  // namespace roadsound
