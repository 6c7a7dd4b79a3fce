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

#include "roadsound/global_features.hpp"

#include <algorithm>
#include <cmath>

#include "roadsound/error.hpp"
#include "roadsound/fft.hpp"

namespace roadsound {
namespace {

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return SortedQuantile(values, 0.5);
}

double SafeRatio(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

double HistogramMode(std::span<const double> v, double lo, double hi) {
  if (hi <= lo) return lo;
  std::array<std::size_t, kModeHistogramBins> counts{};
  const double width = (hi - lo) / kModeHistogramBins;
  for (double x : v) {
    auto bin = static_cast<std::size_t>((x - lo) / width);
    counts[std::min(bin, kModeHistogramBins - 1)]++;
  }
  // max_element returns the first maximum: ties go to the lowest bin.
  const auto best = static_cast<std::size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  return lo + (best + 0.5) * width;
}

}  // namespace

std::string_view GlobalStatName(GlobalStat stat) {
  static constexpr std::array<std::string_view, kGlobalFeatureCount> kNames = {
      "kurtosis", "skewness", "standard_deviation", "variance", "mode", "iqr",
      "mean", "geometric_mean", "harmonic_mean", "median_absolute_deviation",
      "variation", "geometric_standard_deviation", "entropy"};
  return kNames[static_cast<std::size_t>(stat)];
}

std::vector<double> MagnitudeSpectrum(const AudioClip& clip) {
  if (clip.samples.empty()) Fail(ErrorCode::kEmptyClip, "empty clip has no spectrum");
  const auto bins = RealFft(clip.samples, NextPowerOfTwo(clip.size()));
  std::vector<double> mag(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) mag[k] = std::abs(bins[k]);
  return mag;
}

double SortedQuantile(std::span<const double> sorted, double q) {
  Require(!sorted.empty(), "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

GlobalFeatureVector ComputeGlobalFeatures(std::span<const double> spectrum) {
  if (spectrum.empty()) Fail(ErrorCode::kDegenerateSpectrum, "empty spectrum");
  for (double x : spectrum) {
    if (!std::isfinite(x) || x < 0) {
      Fail(ErrorCode::kDegenerateSpectrum, "spectrum entries must be finite and non-negative");
    }
  }
  const auto n = static_cast<double>(spectrum.size());

  std::vector<double> sorted(spectrum.begin(), spectrum.end());
  std::sort(sorted.begin(), sorted.end());
  const bool constant = sorted.front() == sorted.back();

  double mean = 0.0;
  for (double x : spectrum) mean += x;
  mean = constant ? sorted.front() : mean / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : spectrum) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double stddev = std::sqrt(m2);
  const double median = SortedQuantile(sorted, 0.5);
  const double iqr = SortedQuantile(sorted, 0.75) - SortedQuantile(sorted, 0.25);

  std::vector<double> deviations(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    deviations[i] = std::abs(sorted[i] - median);
  }
  const double mad = Median(std::move(deviations));

  double log_sum = 0.0, recip_sum = 0.0, floored_sum = 0.0;
  for (double x : spectrum) {
    const double f = std::max(x, kStatFloor);
    log_sum += std::log(f);
    recip_sum += 1.0 / f;
    floored_sum += f;
  }
  const double log_mean = log_sum / n;
  double log_var = 0.0, entropy = 0.0;
  for (double x : spectrum) {
    const double f = std::max(x, kStatFloor);
    const double d = std::log(f) - log_mean;
    log_var += d * d;
    const double p = f / floored_sum;
    entropy -= p * std::log(p);
  }
  log_var /= n;

  GlobalFeatureVector g;
  auto set = [&g](GlobalStat s, double v) { g.values[static_cast<std::size_t>(s)] = v; };
  set(GlobalStat::kKurtosis, SafeRatio(m4, m2 * m2));
  set(GlobalStat::kSkewness, SafeRatio(m3, m2 * stddev));
  set(GlobalStat::kStandardDeviation, stddev);
  set(GlobalStat::kVariance, m2);
  set(GlobalStat::kMode, HistogramMode(spectrum, sorted.front(), sorted.back()));
  set(GlobalStat::kIqr, iqr);
  set(GlobalStat::kMean, mean);
  set(GlobalStat::kGeometricMean, std::exp(log_mean));
  set(GlobalStat::kHarmonicMean, n / recip_sum);
  set(GlobalStat::kMedianAbsoluteDeviation, mad);
  set(GlobalStat::kVariation, SafeRatio(stddev, mean));
  set(GlobalStat::kGeometricStandardDeviation, std::exp(std::sqrt(log_var)));
  set(GlobalStat::kEntropy, std::max(0.0, entropy));
  return g;
}

}  // namespace roadsound
