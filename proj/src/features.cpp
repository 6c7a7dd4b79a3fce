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

#include "roadsound/features.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <iomanip>
#include <sstream>

#include "byte_io.hpp"
#include "hash.hpp"
#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr std::uint32_t kDtypeFloat32 = 1;

}  // namespace

void FeatureConfig::Validate() const {
  stft.Validate();
  Require(sample_rate > 0 && seconds > 0, "canonical format must be positive");
  Require(pre_emphasis >= 0 && pre_emphasis < 1, "pre-emphasis must be in [0, 1)");
  switch (kind) {
    case FeatureKind::kMelSpectrogram:
      Require(n_mels >= 1, "n_mels must be positive");
      break;
    case FeatureKind::kMfcc:
      Require(n_coeffs >= 1 && n_coeffs <= n_mels, "MFCC count must be in [1, n_mels]");
      break;
    case FeatureKind::kGfcc:
      Require(n_coeffs >= 1 && n_coeffs <= n_filters,
              "GFCC count must be in [1, n_filters]");
      break;
  }
}

std::size_t FeatureConfig::frames() const {
  return FrameCount(CanonicalLength(sample_rate, seconds), stft.hop_size);
}

std::size_t FeatureConfig::coefficients() const {
  return kind == FeatureKind::kMelSpectrogram ? n_mels : n_coeffs;
}

std::uint64_t FeatureConfig::Digest() const {
  std::ostringstream os;
  os << std::setprecision(17) << "kind=" << static_cast<int>(kind)
     << ";win=" << stft.window_size << ";hop=" << stft.hop_size
     << ";fft=" << stft.fft_size << ";sr=" << sample_rate << ";sec=" << seconds
     << ";pre=" << pre_emphasis << ";mels=" << n_mels
     << ";filters=" << n_filters << ";coeffs=" << n_coeffs;
  return detail::Fnv1a(os.str());
}

FeatureExtractor::FeatureExtractor(const FeatureConfig& config) : config_(config) {
  config_.Validate();
  const std::size_t fft = config_.stft.fft_size;
  const double sr = config_.sample_rate;
  switch (config_.kind) {
    case FeatureKind::kMelSpectrogram:
      bank_ = MelFilterbank(fft, sr, config_.n_mels, kMelFloorHz, sr / 2);
      break;
    case FeatureKind::kMfcc:
      bank_ = MelFilterbank(fft, sr, config_.n_mels, kMelFloorHz, sr / 2);
      dct_ = DctMatrix(config_.n_coeffs, config_.n_mels);
      break;
    case FeatureKind::kGfcc:
      bank_ = GammatoneFilterbank(fft, sr, config_.n_filters, kGammatoneFloorHz);
      dct_ = DctMatrix(config_.n_coeffs, config_.n_filters);
      break;
  }
}

LocalFeatureMatrix FeatureExtractor::Local(const AudioClip& canonical) const {
  const Matrix power = PowerSpectrogram(Stft(canonical, config_.stft));
  switch (config_.kind) {
    case FeatureKind::kMelSpectrogram:
      return {LogMel(power, bank_), config_.stft.hop_size, config_.kind};
    case FeatureKind::kMfcc:
      return {Cepstrum(LogMel(power, bank_), dct_), config_.stft.hop_size, config_.kind};
    case FeatureKind::kGfcc:
      return {Cepstrum(CompressedGammatone(power, bank_), dct_),
              config_.stft.hop_size, config_.kind};
  }
  Fail(ErrorCode::kInvalidArgument, "unknown feature kind");
}

FeatureSet FeatureExtractor::Extract(const AudioClip& raw) const {
  const AudioClip clip = PreEmphasis(
      Normalize(raw, config_.sample_rate, config_.seconds), config_.pre_emphasis);
  const LocalFeatureMatrix local = Local(clip);
  const GlobalFeatureVector global = ComputeGlobalFeatures(MagnitudeSpectrum(clip));

  FeatureSet out;
  out.local = BasicMatrix<float>(local.values.rows(), local.values.cols());
  for (std::size_t i = 0; i < local.values.data().size(); ++i) {
    const double v = local.values.data()[i];
    if (!std::isfinite(v)) Fail(ErrorCode::kDegenerateSpectrum, "non-finite local feature");
    out.local.data()[i] = static_cast<float>(v);
  }
  for (std::size_t i = 0; i < kGlobalFeatureCount; ++i) {
    out.global[i] = static_cast<float>(global.values[i]);
  }
  return out;
}

std::vector<std::uint8_t> EncodeFeatureBlob(const FeatureSet& f) {
  detail::ByteWriter w;
  w.PutTag("RSFM");
  w.Put(static_cast<std::uint32_t>(f.local.rows()));
  w.Put(static_cast<std::uint32_t>(f.local.cols()));
  w.Put(kDtypeFloat32);
  for (float v : f.local.data()) w.Put(v);
  for (float v : f.global) w.Put(v);
  return std::move(w.bytes());
}

FeatureSet DecodeFeatureBlob(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, ErrorCode::kChecksumMismatch);
  if (!r.TagIs("RSFM")) Fail(ErrorCode::kVersionUnsupported, "not a feature blob");
  const auto rows = r.Get<std::uint32_t>();
  const auto cols = r.Get<std::uint32_t>();
  if (r.Get<std::uint32_t>() != kDtypeFloat32) {
    Fail(ErrorCode::kVersionUnsupported, "unsupported feature dtype");
  }
  const std::size_t expected =
      (static_cast<std::size_t>(rows) * cols + kGlobalFeatureCount) * sizeof(float);
  if (r.remaining() != expected) {
    Fail(ErrorCode::kChecksumMismatch, "feature blob length disagrees with header");
  }
  FeatureSet f;
  f.local = BasicMatrix<float>(rows, cols);
  for (float& v : f.local.data()) v = r.Get<float>();
  for (float& v : f.global) v = r.Get<float>();
  return f;
}

FeatureCache::FeatureCache(std::filesystem::path dir, const FeatureConfig& config)
    : dir_(std::move(dir)), config_digest_(config.Digest()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) Fail(ErrorCode::kIoFailure, "cannot create cache dir " + dir_.string());
}

std::filesystem::path FeatureCache::PathFor(const std::filesystem::path& audio) const {
  const auto bytes = detail::ReadFileBytes(audio.string());
  char name[64];
  std::snprintf(name, sizeof(name), "%016llx_%016llx.feat",
                static_cast<unsigned long long>(detail::Fnv1a(bytes)),
                static_cast<unsigned long long>(config_digest_));
  return dir_ / name;
}

std::optional<FeatureSet> FeatureCache::Lookup(const std::filesystem::path& audio) const {
  const auto path = PathFor(audio);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return DecodeFeatureBlob(detail::ReadFileBytes(path.string()));
  } catch (const Error&) {
    return std::nullopt;  // stale or partial entry; caller re-extracts
  }
}

void FeatureCache::Store(const std::filesystem::path& audio, const FeatureSet& f) const {
  const auto path = PathFor(audio);
  // Write-then-rename so concurrent readers never observe a partial blob.
  auto tmp = path;
  tmp += ".tmp" + std::to_string(detail::Mix(reinterpret_cast<std::uintptr_t>(&f)));
  detail::WriteFileBytes(tmp.string(), EncodeFeatureBlob(f));
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorCode::kIoFailure, "cannot publish cache entry " + path.string());
}

}  // namespace roadsound
