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

#ifndef ROADSOUND_SPECTRAL_HPP_
#define ROADSOUND_SPECTRAL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roadsound/audio.hpp"
#include "roadsound/fft.hpp"
#include "roadsound/matrix.hpp"

namespace roadsound {

using ComplexMatrix = BasicMatrix<Complex>;

enum class WindowKind { kHann };

struct StftConfig {
  std::size_t window_size = 1024;
  std::size_t hop_size = 512;
  std::size_t fft_size = 2048;
  WindowKind window_kind = WindowKind::kHann;

  void Validate() const;
  bool operator==(const StftConfig&) const = default;
};

enum class FeatureKind { kMelSpectrogram = 0, kMfcc = 1, kGfcc = 2 };

const char* FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(const std::string& name);

struct LocalFeatureMatrix {
  Matrix values;  // frames x coefficients
  std::size_t frame_hop = 0;
  FeatureKind kind = FeatureKind::kGfcc;
};

inline constexpr double kLogFloor = 1e-10;
inline constexpr double kMelFloorHz = 0.0;
inline constexpr double kGammatoneFloorHz = 50.0;
inline constexpr int kGammatoneOrder = 4;

// Periodic Hann window, the COLA-compliant variant for 50% / 75% overlap.
std::vector<double> HannWindow(std::size_t n);

// 1 + floor(signal_length / hop): frame count under centered framing.
std::size_t FrameCount(std::size_t signal_length, std::size_t hop);

// Centered STFT: reflection padding of window_size / 2 per side, Hann
// window, zero padding to fft_size. Rows are frames, columns one-sided bins.
ComplexMatrix Stft(std::span<const double> signal, const StftConfig& cfg);
ComplexMatrix Stft(const AudioClip& clip, const StftConfig& cfg);

Matrix PowerSpectrogram(const ComplexMatrix& frames);

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters, centers uniform on the HTK mel scale.
// n_mels x (fft_size / 2 + 1).
Matrix MelFilterbank(std::size_t fft_size, double sample_rate,
                     std::size_t n_mels, double f_min, double f_max);

// Orthonormal DCT-II basis, n_out x n_in.
Matrix DctMatrix(std::size_t n_out, std::size_t n_in);

// Applies `filters` to every frame of `power` (frames x bins), giving
// frames x filters.
Matrix ApplyFilterbank(const Matrix& power, const Matrix& filters);

LocalFeatureMatrix MelSpectrogram(const AudioClip& clip, const StftConfig& cfg,
                                  std::size_t n_mels);
LocalFeatureMatrix Mfcc(const AudioClip& clip, const StftConfig& cfg,
                        std::size_t n_mels, std::size_t n_coeffs);

struct GammatoneParams {
  int order = kGammatoneOrder;
  double amplitude = 1.0;
  double bandwidth = 100.0;         // Hz
  double center_frequency = 1000.0; // Hz
  double phase = 0.0;               // radians
};

// a t^(n-1) exp(-2 pi b t) cos(2 pi f_c t + phi)
double GammatoneImpulseResponse(double t, const GammatoneParams& p);

// Equivalent rectangular bandwidth in Hz.
double Erb(double hz);
// ERB-number scale, the integral of 1 / ERB.
double HzToErbNumber(double hz);
double ErbNumberToHz(double erb);

// |1 + j (f - f_c) / b|^(-order)
double GammatoneMagnitudeResponse(double hz, double center, double bandwidth,
                                  int order = kGammatoneOrder);

// `n_filters` centers uniform on the ERB-number scale over [f_min, f_max).
std::vector<double> GammatoneCenters(std::size_t n_filters, double f_min,
                                     double f_max);

// Order-4 gammatone magnitude weights with b = 1.019 ERB(f_c), each row
// normalized so its largest bin is 1. n_filters x (fft_size / 2 + 1).
Matrix GammatoneFilterbank(std::size_t fft_size, double sample_rate,
                           std::size_t n_filters, double f_min);

// Power spectrum -> gammatone energies -> cube-root compression taken on a
// log scale -> DCT-II -> first n_coeffs.
LocalFeatureMatrix Gfcc(const AudioClip& clip, const StftConfig& cfg,
                        std::size_t n_filters, std::size_t n_coeffs);

// Shared final stages, exposed so a caller can reuse cached filterbanks.
Matrix LogMel(const Matrix& power, const Matrix& mel_bank);
Matrix CompressedGammatone(const Matrix& power, const Matrix& gammatone_bank);
Matrix Cepstrum(const Matrix& band_values, const Matrix& dct);

}  // namespace roadsound

#endif  // ROADSOUND_SPECTRAL_HPP_
