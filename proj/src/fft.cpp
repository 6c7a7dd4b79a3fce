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

#include "roadsound/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "roadsound/error.hpp"

namespace roadsound {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void Fft(std::span<Complex> data, bool inverse) {
  const std::size_t n = data.size();
  Require(IsPowerOfTwo(n), "FFT length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles computed directly per butterfly column instead of by
    // recurrence, which keeps the error near machine epsilon at n = 2^17.
    std::vector<Complex> twiddle(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * k / len;
      twiddle[k] = Complex(std::cos(angle), std::sin(angle));
    }
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * twiddle[k];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<Complex> RealFft(std::span<const double> x, std::size_t fft_size) {
  std::vector<Complex> buf(fft_size);
  const std::size_t n = std::min(x.size(), fft_size);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
  Fft(buf);
  buf.resize(fft_size / 2 + 1);
  return buf;
}

std::vector<double> InverseRealFft(std::span<const Complex> half_spectrum,
                                   std::size_t fft_size) {
  Require(half_spectrum.size() == fft_size / 2 + 1,
          "half spectrum length must be fft_size / 2 + 1");
  std::vector<Complex> buf(fft_size);
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) buf[k] = half_spectrum[k];
  for (std::size_t k = 1; k < fft_size / 2; ++k) {
    buf[fft_size - k] = std::conj(half_spectrum[k]);
  }
  Fft(buf, true);
  std::vector<double> out(fft_size);
  const double scale = 1.0 / static_cast<double>(fft_size);
  for (std::size_t i = 0; i < fft_size; ++i) out[i] = buf[i].real() * scale;
  return out;
}

}  // namespace roadsound
