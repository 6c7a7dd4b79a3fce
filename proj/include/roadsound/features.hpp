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

#ifndef ROADSOUND_FEATURES_HPP_
#define ROADSOUND_FEATURES_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "roadsound/audio.hpp"
#include "roadsound/global_features.hpp"
#include "roadsound/matrix.hpp"
#include "roadsound/spectral.hpp"

namespace roadsound {

struct FeatureConfig {
  FeatureKind kind = FeatureKind::kGfcc;
  StftConfig stft;
  double sample_rate = kCanonicalSampleRate;
  double seconds = kCanonicalSeconds;
  double pre_emphasis = kDefaultPreEmphasis;
  std::size_t n_mels = 128;
  std::size_t n_filters = 64;
  std::size_t n_coeffs = 40;

  void Validate() const;
  // Shape of the local matrix this configuration produces.
  std::size_t frames() const;
  std::size_t coefficients() const;
  // Stable digest of every field, used as the cache key component.
  std::uint64_t Digest() const;

  bool operator==(const FeatureConfig&) const = default;
};

// Both network inputs for one clip, stored at single precision because that
// is what the cache holds. Fresh and cached extraction therefore agree bit
// for bit.
struct FeatureSet {
  BasicMatrix<float> local;  // frames x coefficients
  std::array<float, kGlobalFeatureCount> global{};
};

// Holds the filterbank and DCT matrices for one configuration. Immutable
// after construction; Extract is safe to call from many threads.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureConfig& config);

  const FeatureConfig& config() const { return config_; }

  // Normalizes the clip, applies pre-emphasis, then computes the configured
  // local matrix and the global vector.
  FeatureSet Extract(const AudioClip& raw) const;
  LocalFeatureMatrix Local(const AudioClip& canonical) const;

 private:
  FeatureConfig config_;
  Matrix bank_;
  Matrix dct_;
};

// Cache blob: 16-byte header {magic "RSFM", rows u32, cols u32, dtype u32},
// row-major little-endian float32 local matrix, then the 13 global floats.
std::vector<std::uint8_t> EncodeFeatureBlob(const FeatureSet& features);
FeatureSet DecodeFeatureBlob(std::span<const std::uint8_t> bytes);

// On-disk cache keyed by (file content hash, feature config digest).
class FeatureCache {
 public:
  FeatureCache(std::filesystem::path dir, const FeatureConfig& config);

  std::filesystem::path PathFor(const std::filesystem::path& audio) const;
  std::optional<FeatureSet> Lookup(const std::filesystem::path& audio) const;
  void Store(const std::filesystem::path& audio, const FeatureSet& features) const;

 private:
  std::filesystem::path dir_;
  std::uint64_t config_digest_;
};

}  // namespace roadsound

#endif  // ROADSOUND_FEATURES_HPP_
