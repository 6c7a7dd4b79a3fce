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

#include "roadsound/augmentation.hpp"

#include <cmath>
#include <numbers>

#include "hash.hpp"
#include "parallel.hpp"
#include "roadsound/error.hpp"
#include "roadsound/spectral.hpp"

namespace roadsound {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double WrapPhase(double phase) {
  return phase - kTwoPi * std::round(phase / kTwoPi);
}

double UniformClosed(double lo, double hi, Rng& rng) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

void AugmentationParams::Validate() const {
  Require(gain_min > 0 && gain_min <= gain_max, "gain range must satisfy 0 < min <= max");
  Require(noise_rate_min >= 0 && noise_rate_min <= noise_rate_max,
          "noise range must satisfy 0 <= min <= max");
  Require(stretch_min > 0 && stretch_min <= stretch_max,
          "stretch range must satisfy 0 < min <= max");
  Require(sample_rate > 0 && seconds > 0, "output format must be positive");
}

AudioClip ApplyGain(const AudioClip& clip, double gain) {
  Require(gain > 0, "gain must be positive");
  AudioClip out = clip;
  for (double& x : out.samples) x *= gain;
  return out;
}

AudioClip InjectNoise(const AudioClip& clip, double rate, Rng& rng) {
  Require(rate >= 0, "noise rate must be non-negative");
  AudioClip out = clip;
  if (rate == 0) return out;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& x : out.samples) x += rate * gauss(rng);
  return out;
}

AudioClip TimeStretch(const AudioClip& clip, double factor) {
  Require(factor > 0, "stretch factor must be positive");
  if (clip.samples.empty()) Fail(ErrorCode::kEmptyClip, "cannot stretch an empty clip");

  const StftConfig cfg{kStretchFftSize, kStretchHop, kStretchFftSize, WindowKind::kHann};
  const ComplexMatrix spec = Stft(clip, cfg);
  const std::size_t frames = spec.rows();
  const std::size_t bins = spec.cols();

  // Expected phase advance of bin k over one hop.
  std::vector<double> advance(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    advance[k] = kTwoPi * k * kStretchHop / kStretchFftSize;
  }
  auto frame_at = [&](std::size_t t, std::size_t k) {
    return t < frames ? spec(t, k) : Complex{};
  };

  std::vector<double> phase(bins);
  for (std::size_t k = 0; k < bins; ++k) phase[k] = std::arg(spec(0, k));

  const auto out_frames =
      static_cast<std::size_t>(std::ceil(static_cast<double>(frames) / factor));
  ComplexMatrix stretched(out_frames, bins);
  for (std::size_t j = 0; j < out_frames; ++j) {
    const double step = j * factor;
    const auto t = static_cast<std::size_t>(step);
    const double alpha = step - static_cast<double>(t);
    for (std::size_t k = 0; k < bins; ++k) {
      const Complex a = frame_at(t, k);
      const Complex b = frame_at(t + 1, k);
      const double mag = (1.0 - alpha) * std::abs(a) + alpha * std::abs(b);
      stretched(j, k) = std::polar(mag, phase[k]);
      const double delta = std::arg(b) - std::arg(a) - advance[k];
      phase[k] += advance[k] + WrapPhase(delta);
    }
  }

  // Weighted overlap-add with window-sum-square normalization, then drop
  // the centering pad.
  const auto window = HannWindow(kStretchFftSize);
  const std::size_t pad = kStretchFftSize / 2;
  const std::size_t span = kStretchFftSize + kStretchHop * (out_frames - 1);
  std::vector<double> acc(span, 0.0), norm(span, 0.0);
  for (std::size_t j = 0; j < out_frames; ++j) {
    const auto frame = InverseRealFft(stretched.row(j), kStretchFftSize);
    const std::size_t offset = j * kStretchHop;
    for (std::size_t i = 0; i < kStretchFftSize; ++i) {
      acc[offset + i] += frame[i] * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  const auto out_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(clip.size() / factor)));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(out_len, 0.0);
  for (std::size_t i = 0; i < out_len && pad + i < span; ++i) {
    const double w = norm[pad + i];
    out.samples[i] = w > 1e-10 ? acc[pad + i] / w : 0.0;
  }
  return out;
}

std::uint64_t AugmentationSeed(std::uint64_t corpus_seed, const std::string& entry_id,
                               AugType type) {
  return detail::Combine(detail::Combine(corpus_seed, detail::Fnv1a(entry_id)),
                         static_cast<std::uint64_t>(type));
}

double DrawAugmentationParam(const AugmentationParams& params, AugType type, Rng& rng) {
  switch (type) {
    case AugType::kGain: return UniformClosed(params.gain_min, params.gain_max, rng);
    case AugType::kNoise:
      return UniformClosed(params.noise_rate_min, params.noise_rate_max, rng);
    case AugType::kStretch:
      return UniformClosed(params.stretch_min, params.stretch_max, rng);
    case AugType::kNone: break;
  }
  Fail(ErrorCode::kInvalidArgument, "no parameter for aug_type none");
}

AudioClip Augment(const AudioClip& canonical, AugType type, double param, Rng& rng,
                  const AugmentationParams& params) {
  switch (type) {
    case AugType::kGain: return ApplyGain(canonical, param);
    case AugType::kNoise: return InjectNoise(canonical, param, rng);
    case AugType::kStretch:
      return Normalize(TimeStretch(canonical, param), params.sample_rate, params.seconds);
    case AugType::kNone: return canonical;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown aug_type");
}

AugmentResult AugmentCorpus(const Manifest& manifest, const std::filesystem::path& out_dir,
                            const AugmentationParams& params, int jobs) {
  params.Validate();
  manifest.Validate();
  for (const auto& e : manifest.entries) {
    Require(e.aug_type == AugType::kNone,
            "input manifest already contains augmented entry '" + e.id + "'");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIoFailure, "cannot create " + out_dir.string());

  const std::size_t n = manifest.size();
  std::vector<std::vector<ManifestEntry>> groups(n);
  std::vector<std::string> errors(n);

  detail::ParallelFor(n, jobs, [&](std::size_t i) {
    const ManifestEntry& parent = manifest.entries[i];
    try {
      const AudioClip canonical =
          Normalize(LoadWav(parent.path), params.sample_rate, params.seconds);
      std::vector<ManifestEntry> group{parent};
      for (AugType type : kAugmentations) {
        Rng rng(AugmentationSeed(params.seed, parent.id, type));
        const double value = DrawAugmentationParam(params, type, rng);
        const AudioClip clip = Augment(canonical, type, value, rng, params);
        ManifestEntry child = parent;
        child.id = parent.id + "__" + std::string(AugTypeName(type));
        child.path = out_dir / (child.id + ".wav");
        child.parent_id = parent.id;
        child.aug_type = type;
        child.aug_param = value;
        WriteWav(child.path, clip);
        group.push_back(std::move(child));
      }
      groups[i] = std::move(group);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  AugmentResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      result.failures.push_back({manifest.entries[i].id, errors[i]});
      continue;
    }
    for (auto& e : groups[i]) result.manifest.entries.push_back(std::move(e));
  }
  return result;
}

}  // namespace roadsound
