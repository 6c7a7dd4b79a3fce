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

#include "roadsound/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

#include "hash.hpp"
#include "parallel.hpp"
#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

// RBJ constant-peak band-pass biquad.
std::vector<double> BandPass(const std::vector<double>& x, double center, double q,
                             double sample_rate) {
  const double w0 = kTwoPi * center / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0, b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0, a2 = (1.0 - alpha) / a0;
  std::vector<double> y(x.size());
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = b0 * x[n] + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[n];
    y2 = y1;
    y1 = y[n];
  }
  return y;
}

}  // namespace

std::array<ClassRecipe, kClassCount> SynthSpec::DefaultRecipes() {
  std::array<ClassRecipe, kClassCount> r;
  r[static_cast<std::size_t>(VehicleClass::kTruck)] = {
      VehicleClass::kTruck, 80.0, 120.0, 8, 0.02, false, 0.0, 0.0};
  r[static_cast<std::size_t>(VehicleClass::kCar)] = {
      VehicleClass::kCar, 200.0, 300.0, 4, 0.05, false, 0.0, 0.0};
  r[static_cast<std::size_t>(VehicleClass::kMotorcycle)] = {
      VehicleClass::kMotorcycle, 400.0, 600.0, 2, 0.05, true, 0.0, 0.0};
  r[static_cast<std::size_t>(VehicleClass::kNoVehicle)] = {
      VehicleClass::kNoVehicle, 0.0, 0.0, 0, 1.0, false, 1500.0, 3500.0};
  // Empty-road scenes range down to levels that quantize to silence.
  r[static_cast<std::size_t>(VehicleClass::kNoVehicle)].level_min = 1e-5;
  return r;
}

void SynthSpec::Validate() const {
  Require(samples_per_class >= 10, "need at least 10 samples per class");
  Require(sample_rate > 0 && seconds > 0, "format must be positive");
  std::set<VehicleClass> labels;
  for (const auto& r : recipes) {
    labels.insert(r.label);
    if (r.harmonics > 0) {
      Require(r.f0_min > 0 && r.f0_min <= r.f0_max, "fundamental range must be positive");
      Require(r.f0_max * static_cast<double>(r.harmonics) < sample_rate / 2,
              "harmonics must stay below nyquist");
    } else {
      Require(r.band_center_min > 0 && r.band_center_min <= r.band_center_max &&
                  r.band_center_max < sample_rate / 2,
              "noise band must lie inside (0, nyquist)");
    }
  }
  for (const auto& r : recipes) {
    Require(r.level_min > 0 && r.level_min <= r.level_max && r.level_max <= 1.0,
            "level range must lie in (0, 1]");
  }
  Require(labels.size() == kClassCount, "every class needs exactly one recipe");
  for (std::size_t i = 0; i < recipes.size(); ++i) {
    for (std::size_t j = i + 1; j < recipes.size(); ++j) {
      const auto& a = recipes[i];
      const auto& b = recipes[j];
      const bool same = a.f0_min == b.f0_min && a.f0_max == b.f0_max &&
                        a.harmonics == b.harmonics &&
                        a.band_center_min == b.band_center_min &&
                        a.band_center_max == b.band_center_max;
      Require(!same, "class recipes must differ in at least one spectral parameter");
    }
  }
}

AudioClip SynthesizeClip(const ClassRecipe& recipe, std::uint64_t seed, double sample_rate,
                         double seconds) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = CanonicalLength(sample_rate, seconds);

  // Pass-by envelope: a Gaussian bump over a small floor.
  const double center = Uniform(rng, 0.35, 0.65) * seconds;
  const double width = Uniform(rng, 0.3, 0.6);
  const double floor = 0.1;
  // Log-uniform loudness so level alone does not identify a class.
  const double peak =
      std::exp(Uniform(rng, std::log(recipe.level_min), std::log(recipe.level_max)));

  std::vector<double> x(n, 0.0);
  if (recipe.harmonics > 0) {
    const double f0 = Uniform(rng, recipe.f0_min, recipe.f0_max);
    double norm = 0.0;
    std::vector<double> phases(recipe.harmonics);
    for (std::size_t h = 0; h < recipe.harmonics; ++h) {
      phases[h] = Uniform(rng, 0.0, kTwoPi);
      norm += 1.0 / static_cast<double>(h + 1);
    }
    const double mod_rate = Uniform(rng, 15.0, 30.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      double v = 0.0;
      for (std::size_t h = 0; h < recipe.harmonics; ++h) {
        const double k = static_cast<double>(h + 1);
        v += std::sin(kTwoPi * k * f0 * t + phases[h]) / k;
      }
      v /= norm;
      if (recipe.amplitude_modulation) {
        v *= (1.0 + 0.5 * std::sin(kTwoPi * mod_rate * t)) / 1.5;
      }
      x[i] = v + recipe.noise_level * gauss(rng);
    }
  } else {
    std::vector<double> white(n);
    for (double& w : white) w = gauss(rng);
    const double band = Uniform(rng, recipe.band_center_min, recipe.band_center_max);
    x = BandPass(white, band, 1.0, sample_rate);
    double energy = 0.0;
    for (double v : x) energy += v * v;
    const double rms = std::sqrt(energy / static_cast<double>(n));
    for (double& v : x) v *= recipe.noise_level * 0.3 / rms;
  }

  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double d = (t - center) / width;
    const double env = floor + (1.0 - floor) * std::exp(-0.5 * d * d);
    clip.samples[i] = std::clamp(peak * env * x[i], -1.0, 32767.0 / 32768.0);
  }
  return clip;
}

Manifest GenerateCorpus(const SynthSpec& spec, const std::filesystem::path& out_dir, int jobs) {
  spec.Validate();
  Manifest manifest;
  for (const auto& recipe : spec.recipes) {
    const std::string name(ClassName(recipe.label));
    std::error_code ec;
    std::filesystem::create_directories(out_dir / name, ec);
    if (ec) Fail(ErrorCode::kIoFailure, "cannot create " + (out_dir / name).string());
    for (std::size_t i = 0; i < spec.samples_per_class; ++i) {
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%04zu", name.c_str(), i);
      ManifestEntry e;
      e.id = id;
      e.path = std::filesystem::absolute(out_dir / name / (e.id + ".wav")).lexically_normal();
      e.label = recipe.label;
      manifest.entries.push_back(std::move(e));
    }
  }

  detail::ParallelFor(manifest.size(), jobs, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    const auto& recipe = spec.recipes[i / spec.samples_per_class];
    const auto seed = detail::Combine(spec.seed, detail::Fnv1a(e.id));
    WriteWav(e.path, SynthesizeClip(recipe, seed, spec.sample_rate, spec.seconds));
  });
  SaveManifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace roadsound
