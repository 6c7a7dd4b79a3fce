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

#include <doctest.h>

#include "oracles.hpp"
#include "roadsound/error.hpp"
#include "roadsound/features.hpp"

using namespace roadsound;

TEST_CASE("feature config shapes per kind") {
  FeatureConfig c;
  CHECK(c.frames() == 130);
  CHECK(c.coefficients() == 40);
  c.kind = FeatureKind::kMelSpectrogram;
  CHECK(c.coefficients() == 128);
  c.kind = FeatureKind::kMfcc;
  CHECK(c.coefficients() == 40);
  c.n_coeffs = 200;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("config digest tracks every field") {
  const FeatureConfig base;
  CHECK(base.Digest() == FeatureConfig{}.Digest());
  FeatureConfig a = base;
  a.kind = FeatureKind::kMfcc;
  FeatureConfig b = base;
  b.pre_emphasis = 0.9;
  FeatureConfig c = base;
  c.stft.hop_size = 256;
  FeatureConfig d = base;
  d.n_filters = 32;
  for (const auto& x : {a, b, c, d}) CHECK(x.Digest() != base.Digest());
}

TEST_CASE("extraction produces canonical shapes from any input length") {
  for (auto kind : {FeatureKind::kMelSpectrogram, FeatureKind::kMfcc, FeatureKind::kGfcc}) {
    FeatureConfig cfg;
    cfg.kind = kind;
    const FeatureExtractor ex(cfg);
    for (std::size_t n : {1000u, 66150u, 90000u}) {
      auto clip = oracle::Noise(n, n);
      const auto f = ex.Extract(clip);
      CHECK(f.local.rows() == 130);
      CHECK(f.local.cols() == cfg.coefficients());
      CHECK(f.global.size() == 13);
      for (float v : f.local.data()) REQUIRE(std::isfinite(v));
      for (float v : f.global) REQUIRE(std::isfinite(v));
    }
  }
  // A 44.1 kHz clip is resampled first.
  const FeatureExtractor ex{FeatureConfig{}};
  CHECK(ex.Extract(oracle::Sine(300, 3.0, 44100)).local.rows() == 130);
}

TEST_CASE("silent clip extracts to finite features") {
  AudioClip silent;
  silent.samples.assign(66150, 0.0);
  const auto f = FeatureExtractor(FeatureConfig{}).Extract(silent);
  for (float v : f.local.data()) REQUIRE(std::isfinite(v));
  for (float v : f.global) REQUIRE(std::isfinite(v));
}

TEST_CASE("feature blob round trip") {
  const auto f = FeatureExtractor(FeatureConfig{}).Extract(oracle::Noise(66150, 3));
  const auto blob = EncodeFeatureBlob(f);
  CHECK(blob.size() == 16 + 130 * 40 * 4 + 13 * 4);
  CHECK(blob[0] == 'R');
  const auto g = DecodeFeatureBlob(blob);
  CHECK(g.local == f.local);
  CHECK(g.global == f.global);

  auto cut = blob;
  cut.resize(cut.size() - 1);
  CHECK_THROWS_AS(DecodeFeatureBlob(cut), Error);
  auto bad = blob;
  bad[1] = 'X';
  CHECK_THROWS_AS(DecodeFeatureBlob(bad), Error);
}

TEST_CASE("feature cache stores and returns identical features") {
  oracle::TempDir dir("cache");
  const FeatureConfig cfg;
  const auto wav = dir / "a.wav";
  WriteWav(wav, oracle::Noise(66150, 31));
  const FeatureCache cache(dir / "cache", cfg);
  CHECK_FALSE(cache.Lookup(wav).has_value());

  const auto fresh = FeatureExtractor(cfg).Extract(LoadWav(wav));
  cache.Store(wav, fresh);
  CHECK(std::filesystem::exists(cache.PathFor(wav)));
  const auto hit = cache.Lookup(wav);
  REQUIRE(hit.has_value());
  CHECK(hit->local == fresh.local);
  CHECK(hit->global == fresh.global);

  // Key depends on content, not on the path.
  const auto copy = dir / "b.wav";
  std::filesystem::copy_file(wav, copy);
  CHECK(cache.PathFor(copy) == cache.PathFor(wav));
  // And on the configuration.
  FeatureConfig other = cfg;
  other.kind = FeatureKind::kMfcc;
  CHECK(FeatureCache(dir / "cache", other).PathFor(wav) != cache.PathFor(wav));

  // A corrupt entry reads as a miss.
  std::ofstream(cache.PathFor(wav), std::ios::binary | std::ios::trunc) << "junk";
  CHECK_FALSE(cache.Lookup(wav).has_value());
}
