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

#ifndef ROADSOUND_GLOBAL_FEATURES_HPP_
#define ROADSOUND_GLOBAL_FEATURES_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "roadsound/audio.hpp"

namespace roadsound {

inline constexpr std::size_t kGlobalFeatureCount = 13;

// Entry order is part of the checkpoint and cache contract.
enum class GlobalStat : std::size_t {
  kKurtosis = 0,
  kSkewness,
  kStandardDeviation,
  kVariance,
  kMode,
  kIqr,
  kMean,
  kGeometricMean,
  kHarmonicMean,
  kMedianAbsoluteDeviation,
  kVariation,
  kGeometricStandardDeviation,
  kEntropy,
};

std::string_view GlobalStatName(GlobalStat stat);

struct GlobalFeatureVector {
  std::array<double, kGlobalFeatureCount> values{};

  double operator[](GlobalStat s) const {
    return values[static_cast<std::size_t>(s)];
  }
};

inline constexpr double kStatFloor = 1e-12;
inline constexpr std::size_t kModeHistogramBins = 256;

// One-sided magnitude of the whole clip, zero-padded to the next power of
// two (66,150 samples -> 131,072-point FFT -> 65,537 bins).
std::vector<double> MagnitudeSpectrum(const AudioClip& clip);

// The 13 statistics over the spectrum values. Kurtosis is Pearson
// (normal = 3); 0/0 moments are reported as 0. Geometric statistics and the
// entropy floor values at kStatFloor first. Throws kDegenerateSpectrum for
// empty input or entries that are negative or non-finite.
GlobalFeatureVector ComputeGlobalFeatures(std::span<const double> spectrum);

// Linear-interpolation quantile, q in [0, 1], on sorted data.
double SortedQuantile(std::span<const double> sorted, double q);

}  // namespace roadsound

#endif  // ROADSOUND_GLOBAL_FEATURES_HPP_
