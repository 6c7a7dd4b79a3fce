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
#include "roadsound/error.hpp"
#include "roadsound/global_features.hpp"
#include "roadsound/synth.hpp"

using namespace roadsound;

namespace {

double ArgmaxHz(const AudioClip& clip) {
  const auto mag = MagnitudeSpectrum(clip);
  const auto k = std::max_element(mag.begin() + 1, mag.end()) - mag.begin();
  return static_cast<double>(k) * clip.sample_rate / static_cast<double>(2 * (mag.size() - 1));
}

}  // namespace

TEST_CASE("default recipes are valid and distinct") {
  SynthSpec spec;
  CHECK_NOTHROW(spec.Validate());
  spec.samples_per_class = 9;
  CHECK_THROWS_AS(spec.Validate(), Error);
  spec = {};
  spec.recipes[1] = spec.recipes[0];
  CHECK_THROWS_AS(spec.Validate(), Error);
  spec = {};
  spec.recipes[0].harmonics = 1000;
  CHECK_THROWS_AS(spec.Validate(), Error);
}

TEST_CASE("generated corpus layout and determinism") {
  oracle::TempDir dir("synth");
  SynthSpec spec;
  spec.samples_per_class = 25;
  spec.seed = 9;
  const auto m = GenerateCorpus(spec, dir / "a", 1);
  REQUIRE(m.size() == 100);
  CHECK(std::filesystem::exists(dir / "a" / "manifest.csv"));
  CHECK(LoadManifest(dir / "a" / "manifest.csv") == m);
  std::array<int, kClassCount> per_class{};
  for (const auto& e : m.entries) {
    per_class[static_cast<std::size_t>(e.label)]++;
    CHECK(e.path.parent_path().filename() == std::string(ClassName(e.label)));
    const auto clip = LoadWav(e.path);
    REQUIRE(clip.size() == 66150);
    CHECK(clip.sample_rate == 22050);
    CHECK(Normalize(clip).samples == clip.samples);
  }
  for (int n : per_class) CHECK(n == 25);

  const auto again = GenerateCorpus(spec, dir / "b", 3);
  for (std::size_t i = 0; i < m.size(); ++i) {
    REQUIRE(oracle::ReadBytes(m.entries[i].path) == oracle::ReadBytes(again.entries[i].path));
  }
  spec.seed = 10;
  const auto other = GenerateCorpus(spec, dir / "c", 1);
  CHECK(oracle::ReadBytes(m.entries[0].path) != oracle::ReadBytes(other.entries[0].path));
}

TEST_CASE("truck-like and no-vehicle spectra peak far apart") {
  const auto recipes = SynthSpec::DefaultRecipes();
  const auto& truck = recipes[static_cast<std::size_t>(VehicleClass::kTruck)];
  const auto& none = recipes[static_cast<std::size_t>(VehicleClass::kNoVehicle)];
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double a = ArgmaxHz(SynthesizeClip(truck, seed, 22050, 3));
    const double d = ArgmaxHz(SynthesizeClip(none, seed + 100, 22050, 3));
    CHECK(a >= 80.0);
    CHECK(a <= 121.0);
    CHECK(d > 10.0 * a);
  }
}

TEST_CASE("clips rise then fall") {
  const auto recipes = SynthSpec::DefaultRecipes();
  for (const auto& r : recipes) {
    const auto clip = SynthesizeClip(r, 3, 22050, 3);
    auto rms = [&](std::size_t from, std::size_t to) {
      double acc = 0;
      for (std::size_t i = from; i < to; ++i) acc += clip.samples[i] * clip.samples[i];
      return std::sqrt(acc / static_cast<double>(to - from));
    };
    const double head = rms(0, 4410), middle = rms(30870, 35280), tail = rms(61740, 66150);
    if (middle == 0.0) continue;  // quantized-to-silence ambience
    CHECK(middle > head);
    CHECK(middle > tail);
  }
}

TEST_CASE("no-vehicle clips separate from vehicles by global-feature centroid") {
  // Nearest-centroid classifier on z-scored global features, 100 clips per class.
  const auto recipes = SynthSpec::DefaultRecipes();
  std::vector<std::array<double, kGlobalFeatureCount>> xs;
  std::vector<bool> is_none;
  for (const auto& r : recipes) {
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto clip = SynthesizeClip(r, 1000 + i + 1000 * static_cast<std::uint64_t>(r.label),
                                       22050, 3);
      xs.push_back(ComputeGlobalFeatures(MagnitudeSpectrum(clip)).values);
      is_none.push_back(r.label == VehicleClass::kNoVehicle);
    }
  }
  std::array<double, kGlobalFeatureCount> mean{}, sd{};
  for (const auto& x : xs) {
    for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) mean[j] += x[j] / xs.size();
  }
  for (const auto& x : xs) {
    for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) {
      sd[j] += (x[j] - mean[j]) * (x[j] - mean[j]) / xs.size();
    }
  }
  for (auto& s : sd) s = std::sqrt(s) + 1e-12;
  std::array<double, kGlobalFeatureCount> c0{}, c1{};
  double n0 = 0, n1 = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto& c = is_none[i] ? c1 : c0;
    (is_none[i] ? n1 : n0) += 1;
    for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) c[j] += (xs[i][j] - mean[j]) / sd[j];
  }
  for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) {
    c0[j] /= n0;
    c1[j] /= n1;
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double d0 = 0, d1 = 0;
    for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) {
      const double z = (xs[i][j] - mean[j]) / sd[j];
      d0 += (z - c0[j]) * (z - c0[j]);
      d1 += (z - c1[j]) * (z - c1[j]);
    }
    correct += (d1 < d0) == is_none[i];
  }
  CHECK(static_cast<double>(correct) / xs.size() > 0.95);
}
