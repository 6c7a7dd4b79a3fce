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

#ifndef ROADSOUND_AUDIO_HPP_
#define ROADSOUND_AUDIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace roadsound {

// Canonical clip format every feature extractor assumes.
inline constexpr double kCanonicalSampleRate = 22050.0;
inline constexpr double kCanonicalSeconds = 3.0;
inline constexpr double kDefaultPreEmphasis = 0.97;

// Mono PCM samples at a declared rate. Amplitudes are nominally in [-1, 1]
// but are not clamped in memory.
struct AudioClip {
  std::vector<double> samples;
  double sample_rate = kCanonicalSampleRate;

  std::size_t size() const { return samples.size(); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Number of samples a clip of `seconds` at `rate` holds after normalization.
std::size_t CanonicalLength(double rate, double seconds);

// RIFF/WAVE decoding. Accepts PCM16 and IEEE float32, mono or stereo
// (stereo is averaged). Throws kMalformedWav / kUnsupportedEncoding.
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);
AudioClip LoadWav(const std::filesystem::path& path);

// PCM16 mono encoding; samples are clamped to the representable range.
std::vector<std::uint8_t> EncodeWav(const AudioClip& clip);
void WriteWav(const std::filesystem::path& path, const AudioClip& clip);

// Resamples (linear interpolation) to `target_rate`, then zero-pads
// symmetrically or center-crops to round(target_rate * target_seconds).
AudioClip Normalize(const AudioClip& clip,
                    double target_rate = kCanonicalSampleRate,
                    double target_seconds = kCanonicalSeconds);

// y[0] = x[0], y[n] = x[n] - alpha * x[n-1].
AudioClip PreEmphasis(const AudioClip& clip,
                      double alpha = kDefaultPreEmphasis);

}  // namespace roadsound

#endif  // ROADSOUND_AUDIO_HPP_
