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

#ifndef ROADSOUND_SYNTH_HPP_
#define ROADSOUND_SYNTH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "roadsound/audio.hpp"
#include "roadsound/manifest.hpp"

namespace roadsound {

// Generative recipe for one synthetic class. A clip is a harmonic tone
// (fundamental drawn per clip from [f0_min, f0_max], harmonic h weighted
// 1/h) plus white noise, or band-limited noise alone when harmonics == 0,
// all under a rising-then-falling pass-by envelope.
struct ClassRecipe {
  VehicleClass label = VehicleClass::kCar;
  double f0_min = 0.0;  // Hz
  double f0_max = 0.0;  // Hz
  std::size_t harmonics = 0;
  double noise_level = 0.0;  // white-noise std relative to peak amplitude
  bool amplitude_modulation = false;
  double band_center_min = 0.0;  // Hz, noise-only recipes
  double band_center_max = 0.0;
  // Peak amplitude, drawn log-uniformly per clip.
  double level_min = 0.02;
  double level_max = 0.6;
};

struct SynthSpec {
  std::array<ClassRecipe, kClassCount> recipes = DefaultRecipes();
  std::size_t samples_per_class = 100;
  std::uint64_t seed = 0;
  double sample_rate = kCanonicalSampleRate;
  double seconds = kCanonicalSeconds;

  static std::array<ClassRecipe, kClassCount> DefaultRecipes();
  void Validate() const;
};

AudioClip SynthesizeClip(const ClassRecipe& recipe, std::uint64_t seed,
                         double sample_rate, double seconds);

// Writes <out_dir>/<class>/<class>_NNNN.wav for every class plus
// <out_dir>/manifest.csv, and returns the manifest.
Manifest GenerateCorpus(const SynthSpec& spec, const std::filesystem::path& out_dir,
                        int jobs = 1);

}  // namespace roadsound

#endif  // ROADSOUND_SYNTH_HPP_
