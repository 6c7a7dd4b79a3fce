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

#ifndef ROADSOUND_AUGMENTATION_HPP_
#define ROADSOUND_AUGMENTATION_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "roadsound/audio.hpp"
#include "roadsound/manifest.hpp"

namespace roadsound {

using Rng = std::mt19937_64;

struct AugmentationParams {
  double gain_min = 0.1;
  double gain_max = 2.0;
  double noise_rate_min = 0.001;
  double noise_rate_max = 0.003;
  double stretch_min = 0.8;
  double stretch_max = 1.5;
  std::uint64_t seed = 0;
  // Canonical output format; augmented clips are normalized to it.
  double sample_rate = kCanonicalSampleRate;
  double seconds = kCanonicalSeconds;

  void Validate() const;
};

// y = g x. No clipping in memory.
AudioClip ApplyGain(const AudioClip& clip, double gain);

// y[n] = x[n] + r * N(0, 1), drawn in order from `rng`.
AudioClip InjectNoise(const AudioClip& clip, double rate, Rng& rng);

inline constexpr std::size_t kStretchFftSize = 2048;
inline constexpr std::size_t kStretchHop = 512;

// Phase-vocoder time-scale modification: output length is
// round(len / factor) and sinusoidal components keep their frequency.
AudioClip TimeStretch(const AudioClip& clip, double factor);

// Seed for one (corpus seed, entry id, augmentation) triple.
std::uint64_t AugmentationSeed(std::uint64_t corpus_seed,
                               const std::string& entry_id, AugType type);

// Parameter draw for one augmentation, uniform in the configured range.
double DrawAugmentationParam(const AugmentationParams& params, AugType type,
                             Rng& rng);

// Produces the augmented clip for `type` given the canonical original.
AudioClip Augment(const AudioClip& canonical, AugType type, double param,
                  Rng& rng, const AugmentationParams& params);

struct AugmentFailure {
  std::string entry_id;
  std::string message;
};

struct AugmentResult {
  Manifest manifest;
  std::vector<AugmentFailure> failures;
};

// Writes <out_dir>/<entry id>__<aug>.wav for each original entry and
// returns the expanded manifest (original, gain, noise, stretch per
// parent, in input order). Failing entries are skipped and reported.
AugmentResult AugmentCorpus(const Manifest& manifest,
                            const std::filesystem::path& out_dir,
                            const AugmentationParams& params, int jobs = 0);

}  // namespace roadsound

#endif  // ROADSOUND_AUGMENTATION_HPP_
