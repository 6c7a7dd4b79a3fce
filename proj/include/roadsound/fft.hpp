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

#ifndef ROADSOUND_FFT_HPP_
#define ROADSOUND_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace roadsound {

using Complex = std::complex<double>;

bool IsPowerOfTwo(std::size_t n);
std::size_t NextPowerOfTwo(std::size_t n);

// In-place iterative radix-2 transform. The inverse is unscaled, i.e.
// Fft(Fft(x), true) == N * x.
void Fft(std::span<Complex> data, bool inverse = false);

// One-sided transform of `x` zero-padded (or truncated) to `fft_size`;
// returns fft_size / 2 + 1 bins.
std::vector<Complex> RealFft(std::span<const double> x, std::size_t fft_size);

// Inverse of RealFft for a Hermitian spectrum; returns fft_size real samples
// scaled by 1 / fft_size.
std::vector<double> InverseRealFft(std::span<const Complex> half_spectrum,
                                   std::size_t fft_size);

}  // namespace roadsound

#endif  // ROADSOUND_FFT_HPP_
