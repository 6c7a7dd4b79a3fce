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

#include "roadsound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr double kPi = std::numbers::pi;

// numpy-style "reflect" index (edge sample not repeated), folded as many
// times as needed for signals shorter than the pad.
std::size_t ReflectIndex(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

std::size_t NearestBin(double hz, std::size_t fft_size, double sample_rate) {
  return static_cast<std::size_t>(std::lround(hz * fft_size / sample_rate));
}

}  // namespace

void StftConfig::Validate() const {
  Require(window_size > 0 && window_size <= fft_size,
          "window size must be in (0, fft_size]");
  Require(hop_size > 0 && hop_size <= window_size,
          "hop size must be in (0, window_size]");
  Require(IsPowerOfTwo(fft_size), "fft size must be a power of two");
}

const char* FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kMelSpectrogram: return "melspec";
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kGfcc: return "gfcc";
  }
  return "unknown";
}

FeatureKind ParseFeatureKind(const std::string& name) {
  if (name == "melspec") return FeatureKind::kMelSpectrogram;
  if (name == "mfcc") return FeatureKind::kMfcc;
  if (name == "gfcc") return FeatureKind::kGfcc;
  Fail(ErrorCode::kInvalidArgument, "unknown feature kind '" + name + "'");
}

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
  }
  return w;
}

std::size_t FrameCount(std::size_t signal_length, std::size_t hop) {
  return 1 + signal_length / hop;
}

ComplexMatrix Stft(std::span<const double> signal, const StftConfig& cfg) {
  cfg.Validate();
  if (signal.empty()) Fail(ErrorCode::kClipTooShort, "STFT needs at least one sample");
  const std::size_t n = signal.size();
  const std::size_t frames = FrameCount(n, cfg.hop_size);
  const std::size_t bins = cfg.fft_size / 2 + 1;
  const auto pad = static_cast<std::ptrdiff_t>(cfg.window_size / 2);
  const auto window = HannWindow(cfg.window_size);

  ComplexMatrix out(frames, bins);
  std::vector<Complex> buf(cfg.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), Complex{});
    const auto start = static_cast<std::ptrdiff_t>(t * cfg.hop_size) - pad;
    for (std::size_t i = 0; i < cfg.window_size; ++i) {
      const auto idx = start + static_cast<std::ptrdiff_t>(i);
      const double x = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n))
                           ? signal[static_cast<std::size_t>(idx)]
                           : signal[ReflectIndex(idx, n)];
      buf[i] = x * window[i];
    }
    Fft(buf);
    std::copy(buf.begin(), buf.begin() + bins, out.row(t).begin());
  }
  return out;
}

ComplexMatrix Stft(const AudioClip& clip, const StftConfig& cfg) {
  return Stft(std::span<const double>(clip.samples), cfg);
}

Matrix PowerSpectrogram(const ComplexMatrix& frames) {
  Matrix power(frames.rows(), frames.cols());
  for (std::size_t i = 0; i < frames.data().size(); ++i) {
    power.data()[i] = std::norm(frames.data()[i]);
  }
  return power;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix MelFilterbank(std::size_t fft_size, double sample_rate,
                     std::size_t n_mels, double f_min, double f_max) {
  Require(n_mels >= 1, "need at least one mel band");
  Require(f_min >= 0 && f_min < f_max && f_max <= sample_rate / 2,
          "mel band edges must satisfy 0 <= f_min < f_max <= nyquist");
  const std::size_t bins = fft_size / 2 + 1;
  const double mel_lo = HzToMel(f_min);
  const double mel_hi = HzToMel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t m = 0; m < edges.size(); ++m) {
    edges[m] = MelToHz(mel_lo + (mel_hi - mel_lo) * m / (n_mels + 1));
  }
  for (std::size_t m = 1; m < edges.size(); ++m) {
    if (NearestBin(edges[m], fft_size, sample_rate) ==
        NearestBin(edges[m - 1], fft_size, sample_rate)) {
      Fail(ErrorCode::kDegenerateBand,
           "mel centers " + std::to_string(m - 1) + " and " +
               std::to_string(m) + " share an FFT bin");
    }
  }

  Matrix bank(n_mels, bins);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = k * sample_rate / fft_size;
      const double w = std::max(0.0, std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid)));
      bank(m, k) = w;
      any = any || w > 0;
    }
    if (!any) {
      Fail(ErrorCode::kDegenerateBand,
           "mel band " + std::to_string(m) + " covers no FFT bin");
    }
  }
  return bank;
}

Matrix DctMatrix(std::size_t n_out, std::size_t n_in) {
  Require(n_out >= 1 && n_out <= n_in, "DCT output count must be in [1, n_in]");
  Matrix dct(n_out, n_in);
  const double s0 = std::sqrt(1.0 / n_in);
  const double sk = std::sqrt(2.0 / n_in);
  for (std::size_t k = 0; k < n_out; ++k) {
    for (std::size_t n = 0; n < n_in; ++n) {
      dct(k, n) = (k == 0 ? s0 : sk) * std::cos(kPi * k * (2.0 * n + 1.0) / (2.0 * n_in));
    }
  }
  return dct;
}

Matrix ApplyFilterbank(const Matrix& power, const Matrix& filters) {
  Require(power.cols() == filters.cols(), "filterbank width must match spectrum bins");
  Matrix out(power.rows(), filters.rows());
  for (std::size_t t = 0; t < power.rows(); ++t) {
    const auto spectrum = power.row(t);
    for (std::size_t m = 0; m < filters.rows(); ++m) {
      const auto w = filters.row(m);
      double acc = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * spectrum[k];
      out(t, m) = acc;
    }
  }
  return out;
}

Matrix LogMel(const Matrix& power, const Matrix& mel_bank) {
  Matrix mel = ApplyFilterbank(power, mel_bank);
  for (double& v : mel.data()) v = std::log(v + kLogFloor);
  return mel;
}

Matrix CompressedGammatone(const Matrix& power, const Matrix& gammatone_bank) {
  Matrix energy = ApplyFilterbank(power, gammatone_bank);
  for (double& v : energy.data()) v = std::log(std::cbrt(v + kLogFloor));
  return energy;
}

Matrix Cepstrum(const Matrix& band_values, const Matrix& dct) {
  Require(band_values.cols() == dct.cols(), "DCT width must match band count");
  Matrix out(band_values.rows(), dct.rows());
  for (std::size_t t = 0; t < band_values.rows(); ++t) {
    const auto bands = band_values.row(t);
    for (std::size_t k = 0; k < dct.rows(); ++k) {
      const auto basis = dct.row(k);
      double acc = 0.0;
      for (std::size_t n = 0; n < bands.size(); ++n) acc += basis[n] * bands[n];
      out(t, k) = acc;
    }
  }
  return out;
}

LocalFeatureMatrix MelSpectrogram(const AudioClip& clip, const StftConfig& cfg,
                                  std::size_t n_mels) {
  const Matrix power = PowerSpectrogram(Stft(clip, cfg));
  const Matrix bank = MelFilterbank(cfg.fft_size, clip.sample_rate, n_mels,
                                    kMelFloorHz, clip.sample_rate / 2);
  return {LogMel(power, bank), cfg.hop_size, FeatureKind::kMelSpectrogram};
}

LocalFeatureMatrix Mfcc(const AudioClip& clip, const StftConfig& cfg,
                        std::size_t n_mels, std::size_t n_coeffs) {
  Require(n_coeffs <= n_mels, "MFCC count cannot exceed mel band count");
  const Matrix power = PowerSpectrogram(Stft(clip, cfg));
  const Matrix bank = MelFilterbank(cfg.fft_size, clip.sample_rate, n_mels,
                                    kMelFloorHz, clip.sample_rate / 2);
  return {Cepstrum(LogMel(power, bank), DctMatrix(n_coeffs, n_mels)),
          cfg.hop_size, FeatureKind::kMfcc};
}

double GammatoneImpulseResponse(double t, const GammatoneParams& p) {
  Require(t >= 0, "gammatone time must be non-negative");
  return p.amplitude * std::pow(t, p.order - 1) *
         std::exp(-2.0 * kPi * p.bandwidth * t) *
         std::cos(2.0 * kPi * p.center_frequency * t + p.phase);
}

double Erb(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

double HzToErbNumber(double hz) {
  return 1000.0 / (24.7 * 4.37) * std::log(1.0 + 4.37 * hz / 1000.0);
}

double ErbNumberToHz(double erb) {
  return (std::exp(erb * 24.7 * 4.37 / 1000.0) - 1.0) * 1000.0 / 4.37;
}

double GammatoneMagnitudeResponse(double hz, double center, double bandwidth,
                                  int order) {
  const double x = (hz - center) / bandwidth;
  return std::pow(1.0 + x * x, -0.5 * order);
}

std::vector<double> GammatoneCenters(std::size_t n_filters, double f_min,
                                     double f_max) {
  Require(n_filters >= 1, "need at least one gammatone filter");
  Require(f_min >= 0 && f_min < f_max, "gammatone range must be non-empty");
  const double lo = HzToErbNumber(f_min);
  const double step = (HzToErbNumber(f_max) - lo) / n_filters;
  std::vector<double> centers(n_filters);
  for (std::size_t i = 0; i < n_filters; ++i) {
    centers[i] = ErbNumberToHz(lo + step * i);
  }
  return centers;
}

Matrix GammatoneFilterbank(std::size_t fft_size, double sample_rate,
                           std::size_t n_filters, double f_min) {
  const double nyquist = sample_rate / 2;
  const auto centers = GammatoneCenters(n_filters, f_min, nyquist);
  for (std::size_t i = 1; i < centers.size(); ++i) {
    if (NearestBin(centers[i], fft_size, sample_rate) ==
        NearestBin(centers[i - 1], fft_size, sample_rate)) {
      Fail(ErrorCode::kDegenerateBand,
           "gammatone centers " + std::to_string(i - 1) + " and " +
               std::to_string(i) + " share an FFT bin");
    }
  }
  const std::size_t bins = fft_size / 2 + 1;
  Matrix bank(n_filters, bins);
  for (std::size_t j = 0; j < n_filters; ++j) {
    const double fc = centers[j];
    const double b = 1.019 * Erb(fc);
    const std::size_t center_bin = NearestBin(fc, fft_size, sample_rate);
    const double peak = GammatoneMagnitudeResponse(
        center_bin * sample_rate / fft_size, fc, b);
    for (std::size_t k = 0; k < bins; ++k) {
      bank(j, k) = GammatoneMagnitudeResponse(k * sample_rate / fft_size, fc, b) / peak;
    }
  }
  return bank;
}

LocalFeatureMatrix Gfcc(const AudioClip& clip, const StftConfig& cfg,
                        std::size_t n_filters, std::size_t n_coeffs) {
  Require(n_coeffs <= n_filters, "GFCC count cannot exceed filter count");
  const Matrix power = PowerSpectrogram(Stft(clip, cfg));
  const Matrix bank = GammatoneFilterbank(cfg.fft_size, clip.sample_rate,
                                          n_filters, kGammatoneFloorHz);
  return {Cepstrum(CompressedGammatone(power, bank), DctMatrix(n_coeffs, n_filters)),
          cfg.hop_size, FeatureKind::kGfcc};
}

}  // namespace roadsound
