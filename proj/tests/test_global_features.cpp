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

#include <algorithm>

#include "oracles.hpp"
#include "roadsound/augmentation.hpp"
#include "roadsound/error.hpp"
#include "roadsound/global_features.hpp"

using namespace roadsound;
using S = GlobalStat;

namespace {

GlobalFeatureVector Of(std::vector<double> v) { return ComputeGlobalFeatures(v); }

constexpr std::array<S, 5> kScaleInvariant = {S::kKurtosis, S::kSkewness, S::kVariation,
                                              S::kEntropy, S::kGeometricStandardDeviation};
constexpr std::array<S, 8> kScaleCovariant = {
    S::kStandardDeviation, S::kMode,          S::kIqr,
    S::kMean,              S::kGeometricMean, S::kHarmonicMean,
    S::kMedianAbsoluteDeviation, S::kStandardDeviation};

}  // namespace

TEST_CASE("stat names follow the fixed order") {
  CHECK(GlobalStatName(S::kKurtosis) == "kurtosis");
  CHECK(GlobalStatName(S::kMode) == "mode");
  CHECK(GlobalStatName(S::kEntropy) == "entropy");
}

TEST_CASE("hand-computed statistics") {
  const auto g = Of({1, 2, 3, 4});
  CHECK(g[S::kMean] == 2.5);
  CHECK(g[S::kVariance] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(g[S::kStandardDeviation] == doctest::Approx(std::sqrt(1.25)));
  CHECK(g[S::kHarmonicMean] == doctest::Approx(48.0 / 25.0).epsilon(1e-15));
  CHECK(g[S::kGeometricMean] == doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-14));
  CHECK(g[S::kSkewness] == doctest::Approx(0.0));
  // Pearson kurtosis: m4 / m2^2 = 2.5625 / 1.5625.
  CHECK(g[S::kKurtosis] == doctest::Approx(1.64).epsilon(1e-14));
  // Linear-interpolation quartiles 1.75 and 3.25.
  CHECK(g[S::kIqr] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(g[S::kMedianAbsoluteDeviation] == 1.0);
  CHECK(g[S::kVariation] == doctest::Approx(std::sqrt(1.25) / 2.5));
  CHECK(g[S::kEntropy] == doctest::Approx(-(0.1 * std::log(0.1) + 0.2 * std::log(0.2) +
                                            0.3 * std::log(0.3) + 0.4 * std::log(0.4))));

  CHECK(Of({1, 3})[S::kGeometricMean] == doctest::Approx(1.7320508).epsilon(1e-8));
}

TEST_CASE("constant spectrum") {
  const double c = 0.37;
  const auto g = Of(std::vector<double>(1000, c));
  CHECK(g[S::kMean] == c);
  CHECK(g[S::kVariance] == 0.0);
  CHECK(g[S::kSkewness] == 0.0);
  CHECK(g[S::kKurtosis] == 0.0);
  CHECK(g[S::kMode] == c);
  CHECK(g[S::kVariation] == 0.0);
  CHECK(g[S::kGeometricMean] == doctest::Approx(c).epsilon(1e-14));
  CHECK(g[S::kHarmonicMean] == doctest::Approx(c).epsilon(1e-14));
  CHECK(g[S::kGeometricStandardDeviation] == doctest::Approx(1.0));
  CHECK(g[S::kEntropy] == doctest::Approx(std::log(1000.0)).epsilon(1e-12));

  const auto zero = Of(std::vector<double>(64, 0.0));
  for (double v : zero.values) CHECK(std::isfinite(v));
}

TEST_CASE("histogram mode picks the densest bin centre") {
  std::vector<double> v = {0.0, 256.0};
  for (int i = 0; i < 10; ++i) v.push_back(100.2);
  const auto g = Of(v);
  CHECK(g[S::kMode] == doctest::Approx(100.5));
  // A tie resolves to the lowest bin.
  CHECK(Of({0.0, 256.0})[S::kMode] == doctest::Approx(0.5));
}

TEST_CASE("degenerate inputs are rejected") {
  for (const auto& bad : {std::vector<double>{}, std::vector<double>{1.0, -1.0},
                          std::vector<double>{1.0, std::nan("")}}) {
    try {
      Of(bad);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerateSpectrum);
    }
  }
}

TEST_CASE("vector invariants on random spectra") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto v = oracle::RandomSignal(512, seed, 5.0);
    for (auto& x : v) x = std::abs(x);
    const auto g = Of(v);
    for (double x : g.values) REQUIRE(std::isfinite(x));
    CHECK(oracle::RelDiff(g[S::kVariance], g[S::kStandardDeviation] * g[S::kStandardDeviation]) <
          1e-9);
    CHECK(g[S::kVariance] >= 0);
    CHECK(g[S::kIqr] >= 0);
    CHECK(g[S::kEntropy] >= 0);
    CHECK(g[S::kEntropy] < std::log(512.0));

    auto shuffled = v;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto h = Of(shuffled);
    for (std::size_t i = 0; i < kGlobalFeatureCount; ++i) {
      REQUIRE(oracle::RelDiff(g.values[i], h.values[i]) < 1e-9);
    }
  }
}

TEST_CASE("symmetric multisets have zero skewness") {
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) {
    v.push_back(500.0 + 0.2 * i * i);
    v.push_back(500.0 - 0.2 * i * i);
  }
  CHECK(std::abs(Of(v)[S::kSkewness]) < 1e-9);
}

TEST_CASE("magnitude spectrum of whole clips") {
  AudioClip silent;
  silent.samples.assign(66150, 0.0);
  const auto z = MagnitudeSpectrum(silent);
  CHECK(z.size() == 65537);
  CHECK(std::all_of(z.begin(), z.end(), [](double x) { return x == 0.0; }));

  AudioClip dc;
  dc.samples.assign(66150, 1.0);
  const auto d = MagnitudeSpectrum(dc);
  CHECK(d[0] == doctest::Approx(66150.0).epsilon(1e-12));

  const auto s = MagnitudeSpectrum(oracle::Sine(440, 3.0));
  const auto argmax = std::max_element(s.begin(), s.end()) - s.begin();
  CHECK(argmax == std::lround(440.0 * 131072 / 22050));
  CHECK(argmax == 2615);
}

TEST_CASE("gain leaves shape statistics unchanged and scales the rest") {
  const auto clip = oracle::Noise(66150, 21, 0.3);
  const auto base = ComputeGlobalFeatures(MagnitudeSpectrum(clip));
  for (double g : {0.1, 0.5, 2.0}) {
    CAPTURE(g);
    const auto scaled = ComputeGlobalFeatures(MagnitudeSpectrum(ApplyGain(clip, g)));
    for (auto s : kScaleInvariant) CHECK(oracle::RelDiff(base[s], scaled[s]) < 1e-6);
    for (auto s : kScaleCovariant) CHECK(oracle::RelDiff(base[s] * g, scaled[s]) < 1e-6);
    CHECK(oracle::RelDiff(base[S::kVariance] * g * g, scaled[S::kVariance]) < 1e-6);
  }
}
